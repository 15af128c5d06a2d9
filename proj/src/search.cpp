// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "psq/errors.hpp"

namespace psq {

RankedList search(const InvertedIndex& index, const Query& query, std::size_t depth) {
    if (depth < 1)
        throw std::invalid_argument("depth must be >= 1");

    std::vector<double> scores(index.doc_ids().size(), 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<bool> seen(index.doc_ids().size(), false);

    for (const auto& token : query.tokens) {
        const auto id = index.query_vocab().find(token);
        if (!id)
            continue;
        for (const auto& p : index.postings_for(*id)) {
            scores[p.doc] += p.weight;
            if (!seen[p.doc]) {
                seen[p.doc] = true;
                touched.push_back(p.doc);
            }
        }
    }

    std::sort(touched.begin(), touched.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return a < b;
    });
    if (touched.size() > depth)
        touched.resize(depth);

    RankedList out;
    out.query_id = query.query_id;
    out.items.reserve(touched.size());
    for (const auto doc : touched)
        out.items.push_back({index.doc_ids()[doc], scores[doc]});
    return out;
}

std::vector<RankedList> batch_search(const InvertedIndex& index, std::span<const Query> queries,
                                     std::size_t depth) {
    std::vector<RankedList> out;
    out.reserve(queries.size());
    for (const auto& q : queries) {
        try {
            out.push_back(search(index, q, depth));
        } catch (const std::exception& e) {
            std::cerr << "warning: query " << q.query_id << " failed: " << e.what() << "\n";
            out.push_back({q.query_id, {}});
        }
    }
    return out;
}

double dense_oracle_score(const Query& query, const TranslatedDocVector& doc,
                          const Vocabulary& query_vocab, const UnigramLM& lm,
                          const SmoothingConfig& cfg) {
    cfg.validate();
    double score = 0.0;
    for (const auto& token : query.tokens) {
        const double p_bg = lm.lookup(token);
        double p_doc = 0.0;
        if (const auto id = query_vocab.find(token))
            p_doc = doc.probability_for(*id);
        score += std::log(cfg.alpha * p_bg + (1.0 - cfg.alpha) * p_doc);
    }
    return score;
}

std::vector<Query> load_queries(const std::string& path, const TokenizerConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open query file: " + path);
    std::vector<Query> queries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path, lineno, "expected query_id<TAB>query_text");
        Query q;
        q.query_id = line.substr(0, tab);
        if (q.query_id.empty())
            throw ParseError(path, lineno, "empty query id");
        q.tokens = tokenize(line.substr(tab + 1), cfg);
        queries.push_back(std::move(q));
    }
    return queries;
}

void save_run(const std::string& path, std::span<const RankedList> runs,
              const std::string& run_tag) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    char score_buf[64];
    for (const auto& run : runs) {
        for (std::size_t rank = 0; rank < run.items.size(); ++rank) {
            std::snprintf(score_buf, sizeof score_buf, "%.6f", run.items[rank].score);
            out << run.query_id << " Q0 " << run.items[rank].doc_id << ' ' << (rank + 1) << ' '
                << score_buf << ' ' << run_tag << '\n';
        }
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

std::vector<RankedList> load_run(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open run file: " + path);

    // Keyed by query id in file order; lines within a query follow their
    // rank column.
    std::vector<RankedList> runs;
    std::map<std::string, std::size_t> by_id;
    std::vector<std::vector<std::pair<std::uint64_t, ScoredDoc>>> pending;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string qid, q0, did, rank_text, score_text, tag;
        if (!(fields >> qid >> q0 >> did >> rank_text >> score_text >> tag))
            throw ParseError(path, lineno, "expected 6 whitespace-separated run fields");
        char* end = nullptr;
        const std::uint64_t rank = std::strtoull(rank_text.c_str(), &end, 10);
        if (end != rank_text.c_str() + rank_text.size() || rank < 1)
            throw ParseError(path, lineno, "bad rank field '" + rank_text + "'");
        const double score = std::strtod(score_text.c_str(), &end);
        if (end != score_text.c_str() + score_text.size())
            throw ParseError(path, lineno, "bad score field '" + score_text + "'");

        auto [it, inserted] = by_id.emplace(qid, runs.size());
        if (inserted) {
            runs.push_back({qid, {}});
            pending.emplace_back();
        }
        pending[it->second].emplace_back(rank, ScoredDoc{did, score});
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto& lines = pending[i];
        std::stable_sort(lines.begin(), lines.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        runs[i].items.reserve(lines.size());
        for (auto& [rank, item] : lines)
            runs[i].items.push_back(std::move(item));
    }
    return runs;
}

} // namespace psq
