// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/indexer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "psq/errors.hpp"

namespace psq {

void SmoothingConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be strictly inside (0,1)");
}

DocumentVector vectorize(std::string doc_id, const TokenSequence& tokens,
                         Vocabulary& source_vocab) {
    DocumentVector dv;
    dv.doc_id = std::move(doc_id);
    dv.length = tokens.size();
    std::unordered_map<std::uint32_t, std::size_t> slot;
    for (const auto& token : tokens) {
        const std::uint32_t id = source_vocab.intern(token);
        auto [it, inserted] = slot.emplace(id, dv.entries.size());
        if (inserted)
            dv.entries.emplace_back(id, 1);
        else
            ++dv.entries[it->second].second;
    }
    return dv;
}

TranslatedDocVector translate_document(const DocumentVector& doc, const Vocabulary& source_vocab,
                                       const TranslationTable& table, Vocabulary& query_vocab) {
    TranslatedDocVector tv;
    tv.doc_id = doc.doc_id;
    if (doc.length == 0)
        return tv;

    std::unordered_map<std::uint32_t, std::size_t> slot;
    for (const auto& [source_id, tf] : doc.entries) {
        const auto* list = table.find(source_vocab.token(source_id));
        if (!list)
            continue;
        const double p_source = static_cast<double>(tf) / static_cast<double>(doc.length);
        for (const auto& e : *list) {
            const std::uint32_t qid = query_vocab.intern(e.target);
            auto [it, inserted] = slot.emplace(qid, tv.entries.size());
            if (inserted)
                tv.entries.emplace_back(qid, e.prob * p_source);
            else
                tv.entries[it->second].second += e.prob * p_source;
        }
    }
    return tv;
}

double term_weight(double p_doc, double p_bg, const SmoothingConfig& cfg) {
    cfg.validate();
    if (!(p_bg > 0.0))
        throw std::invalid_argument("background probability must be positive");
    if (p_doc < 0.0)
        throw std::invalid_argument("document probability must be nonnegative");
    if (p_doc == 0.0)
        return 0.0;
    return std::log1p(((1.0 - cfg.alpha) * p_doc) / (cfg.alpha * p_bg));
}

InvertedIndex build_index(std::span<const Document> docs, const TranslationTable& table,
                          const UnigramLM& lm, const SmoothingConfig& smoothing,
                          std::size_t chunk_size, IndexMetadata provenance) {
    smoothing.validate();
    if (docs.empty())
        throw std::invalid_argument("empty document stream");
    if (chunk_size < 1)
        throw std::invalid_argument("chunk_size must be >= 1");

    {
        std::unordered_set<std::string_view> ids;
        for (const auto& doc : docs)
            if (!ids.insert(doc.id).second)
                throw std::invalid_argument("duplicate doc id: " + doc.id);
    }

    Vocabulary source_vocab;
    Vocabulary query_vocab;
    std::vector<std::string> doc_ids;
    doc_ids.reserve(docs.size());
    std::vector<std::vector<Posting>> postings;

    // Memoized per-build lookups; the accumulation order is identical to
    // vectorize() + translate_document(), so weights are bit-equal to the
    // per-document path.
    std::vector<const TranslationTable::EntryList*> list_for_source;
    std::vector<double> bg_for_query;
    const double kUnsetBg = -1.0;

    std::uint32_t generation = 0;
    std::vector<std::uint32_t> source_stamp, source_slot;
    std::vector<std::uint32_t> query_stamp, query_slot;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> tf_entries;  // (source id, tf)
    std::vector<std::pair<std::uint32_t, double>> translated;         // (query id, prob)

    using WeightedDoc = std::vector<std::pair<std::uint32_t, double>>; // (token id, weight)
    std::vector<WeightedDoc> chunk;
    chunk.reserve(std::min<std::size_t>(chunk_size, docs.size()));
    std::size_t flushed = 0;

    auto flush = [&] {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const auto ordinal = static_cast<std::uint32_t>(flushed + i);
            for (const auto& [qid, weight] : chunk[i]) {
                if (postings.size() <= qid)
                    postings.resize(query_vocab.size());
                postings[qid].push_back({ordinal, weight});
            }
        }
        flushed += chunk.size();
        chunk.clear();
    };

    for (const auto& doc : docs) {
        doc_ids.push_back(doc.id);
        ++generation;

        tf_entries.clear();
        for (const auto& token : doc.tokens) {
            const std::uint32_t sid = source_vocab.intern(token);
            if (sid >= source_stamp.size()) {
                source_stamp.resize(source_vocab.size(), 0);
                source_slot.resize(source_vocab.size(), 0);
                list_for_source.resize(source_vocab.size(), nullptr);
                list_for_source[sid] = table.find(token);
            }
            if (source_stamp[sid] != generation) {
                source_stamp[sid] = generation;
                source_slot[sid] = static_cast<std::uint32_t>(tf_entries.size());
                tf_entries.emplace_back(sid, 1);
            } else {
                ++tf_entries[source_slot[sid]].second;
            }
        }

        translated.clear();
        if (!doc.tokens.empty()) {
            for (const auto& [sid, tf] : tf_entries) {
                const auto* list = list_for_source[sid];
                if (!list)
                    continue;
                const double p_source =
                    static_cast<double>(tf) / static_cast<double>(doc.tokens.size());
                for (const auto& e : *list) {
                    const std::uint32_t qid = query_vocab.intern(e.target);
                    if (qid >= query_stamp.size()) {
                        query_stamp.resize(query_vocab.size(), 0);
                        query_slot.resize(query_vocab.size(), 0);
                        bg_for_query.resize(query_vocab.size(), kUnsetBg);
                    }
                    if (query_stamp[qid] != generation) {
                        query_stamp[qid] = generation;
                        query_slot[qid] = static_cast<std::uint32_t>(translated.size());
                        translated.emplace_back(qid, e.prob * p_source);
                    } else {
                        translated[query_slot[qid]].second += e.prob * p_source;
                    }
                }
            }
        }

        WeightedDoc weighted;
        weighted.reserve(translated.size());
        for (const auto& [qid, p] : translated) {
            if (p < kTranslatedProbFloor)
                continue;
            if (bg_for_query[qid] == kUnsetBg)
                bg_for_query[qid] = lm.lookup(query_vocab.token(qid));
            weighted.emplace_back(qid, term_weight(p, bg_for_query[qid], smoothing));
        }
        chunk.push_back(std::move(weighted));
        if (chunk.size() >= chunk_size)
            flush();
    }
    flush();
    postings.resize(query_vocab.size());

    for (auto& list : postings) {
        std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) {
            if (a.weight != b.weight)
                return a.weight > b.weight;
            return a.doc < b.doc;
        });
    }

    provenance.alpha = smoothing.alpha;
    provenance.version = std::string(kVersion);
    return InvertedIndex(std::move(query_vocab), std::move(doc_ids), std::move(postings),
                         std::move(provenance));
}

std::vector<Document> load_documents_jsonl(const std::string& path, const TokenizerConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open documents file: " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.contains("text") ||
            !j["id"].is_string() || !j["text"].is_string())
            throw ParseError(path, lineno, "expected {\"id\": string, \"text\": string}");
        docs.push_back({j["id"].get<std::string>(),
                        tokenize(j["text"].get<std::string>(), cfg)});
    }
    return docs;
}

} // namespace psq
