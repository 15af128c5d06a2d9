// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/inverted_index.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

namespace psq {

nlohmann::json tokenizer_config_to_json(const TokenizerConfig& cfg) {
    return {{"lowercase", cfg.lowercase},
            {"strip_diacritics", cfg.strip_diacritics},
            {"strip_punctuation", cfg.strip_punctuation},
            {"stopwords", cfg.stopwords},
            {"language_tag", cfg.language_tag}};
}

TokenizerConfig tokenizer_config_from_json(const nlohmann::json& j) {
    TokenizerConfig cfg;
    cfg.lowercase = j.at("lowercase").get<bool>();
    cfg.strip_diacritics = j.at("strip_diacritics").get<bool>();
    cfg.strip_punctuation = j.at("strip_punctuation").get<bool>();
    cfg.stopwords = j.at("stopwords").get<std::set<std::string>>();
    cfg.language_tag = j.at("language_tag").get<std::string>();
    return cfg;
}

nlohmann::json IndexMetadata::to_json() const {
    return {{"alpha", alpha},
            {"built_at", built_at},
            {"pruning", pruning.to_json()},
            {"tokenizer",
             {{"doc", tokenizer_config_to_json(doc_tokenizer)},
              {"query", tokenizer_config_to_json(query_tokenizer)}}},
            {"version", version}};
}

IndexMetadata IndexMetadata::from_json(const nlohmann::json& j) {
    IndexMetadata meta;
    meta.alpha = j.at("alpha").get<double>();
    meta.built_at = j.at("built_at").get<std::string>();
    meta.pruning = PruningConfig::from_json(j.at("pruning"));
    meta.doc_tokenizer = tokenizer_config_from_json(j.at("tokenizer").at("doc"));
    meta.query_tokenizer = tokenizer_config_from_json(j.at("tokenizer").at("query"));
    meta.version = j.at("version").get<std::string>();
    return meta;
}

InvertedIndex::InvertedIndex(Vocabulary query_vocab, std::vector<std::string> doc_ids,
                             std::vector<std::vector<Posting>> postings, IndexMetadata metadata)
    : vocab_(std::move(query_vocab)),
      doc_ids_(std::move(doc_ids)),
      postings_(std::move(postings)),
      meta_(std::move(metadata)) {
    if (postings_.size() != vocab_.size())
        throw std::invalid_argument("postings table size does not match vocabulary");
    std::vector<bool> seen(doc_ids_.size());
    for (const auto& list : postings_) {
        seen.assign(doc_ids_.size(), false);
        const Posting* prev = nullptr;
        for (const auto& p : list) {
            if (p.doc >= doc_ids_.size())
                throw std::invalid_argument("posting ordinal out of range");
            if (!(p.weight > 0.0))
                throw std::invalid_argument("non-positive posting weight");
            if (seen[p.doc])
                throw std::invalid_argument("duplicate document ordinal in postings list");
            seen[p.doc] = true;
            if (prev && (prev->weight < p.weight ||
                         (prev->weight == p.weight && prev->doc > p.doc)))
                throw std::invalid_argument("postings list out of order");
            prev = &p;
        }
    }
}

std::uint64_t InvertedIndex::total_postings() const {
    std::uint64_t n = 0;
    for (const auto& list : postings_)
        n += list.size();
    return n;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(std::string& out, std::string_view s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str(std::size_t len) {
        need(len);
        std::string s(bytes_.substr(pos_, len));
        pos_ += len;
        return s;
    }

    std::string lstr() { return str(u32()); }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size())
            throw std::runtime_error("truncated index data");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::string InvertedIndex::serialize() const {
    std::string out;
    out.append(kIndexMagic);
    put_u64(out, vocab_.size());
    put_u64(out, doc_ids_.size());
    put_u64(out, total_postings());
    for (const auto& token : vocab_.tokens())
        put_string(out, token);
    for (const auto& id : doc_ids_)
        put_string(out, id);
    for (const auto& list : postings_) {
        put_u64(out, list.size());
        for (const auto& p : list) {
            put_u32(out, p.doc);
            put_f64(out, p.weight);
        }
    }
    const std::string trailer = meta_.to_json().dump();
    put_u64(out, trailer.size());
    out.append(trailer);
    return out;
}

InvertedIndex InvertedIndex::deserialize(std::string_view bytes) {
    Reader r(bytes);
    if (r.str(kIndexMagic.size()) != kIndexMagic)
        throw std::runtime_error("bad index magic; not a PSQIDX01 file");
    const std::uint64_t vocab_count = r.u64();
    const std::uint64_t doc_count = r.u64();
    const std::uint64_t posting_count = r.u64();

    Vocabulary vocab;
    for (std::uint64_t i = 0; i < vocab_count; ++i) {
        const std::string token = r.lstr();
        if (vocab.intern(token) != i)
            throw std::runtime_error("duplicate token in index vocabulary: " + token);
    }
    std::vector<std::string> doc_ids;
    doc_ids.reserve(doc_count);
    for (std::uint64_t i = 0; i < doc_count; ++i)
        doc_ids.push_back(r.lstr());

    std::uint64_t seen_postings = 0;
    std::vector<std::vector<Posting>> postings(vocab_count);
    for (std::uint64_t t = 0; t < vocab_count; ++t) {
        const std::uint64_t len = r.u64();
        postings[t].reserve(len);
        for (std::uint64_t i = 0; i < len; ++i) {
            const std::uint32_t doc = r.u32();
            const double weight = r.f64();
            postings[t].push_back({doc, weight});
        }
        seen_postings += len;
    }
    if (seen_postings != posting_count)
        throw std::runtime_error("posting count mismatch in index header");

    const std::uint64_t trailer_len = r.u64();
    const std::string trailer = r.str(trailer_len);
    if (!r.at_end())
        throw std::runtime_error("trailing bytes after index trailer");
    IndexMetadata meta = IndexMetadata::from_json(nlohmann::json::parse(trailer));

    return InvertedIndex(std::move(vocab), std::move(doc_ids), std::move(postings),
                         std::move(meta));
}

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    const std::string bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open index: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return deserialize(bytes);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

IndexSize index_size(const InvertedIndex& index) {
    return {static_cast<std::uint64_t>(index.serialize().size()), index.total_postings()};
}

} // namespace psq
