// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "psq/config_json.hpp"
#include "psq/pruning.hpp"
#include "psq/vocabulary.hpp"

namespace psq {

inline constexpr std::string_view kIndexMagic = "PSQIDX01";
inline constexpr std::string_view kVersion = "0.1.0";

struct Posting {
    std::uint32_t doc = 0; // document ordinal
    double weight = 0.0;   // always > 0

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Build provenance carried in the serialized trailer. `built_at` is a build
/// input, not sampled at serialization time, so rebuilding with identical
/// inputs yields identical bytes.
struct IndexMetadata {
    double alpha = 0.5;
    PruningConfig pruning{};
    TokenizerConfig doc_tokenizer{};
    TokenizerConfig query_tokenizer{};
    std::string built_at;
    std::string version{kVersion};

    nlohmann::json to_json() const;
    static IndexMetadata from_json(const nlohmann::json& j);
};

/// Inverted index over query-language tokens. Postings lists are sorted by
/// weight descending, ties by document ordinal ascending, and never contain
/// zero weights or duplicate ordinals.
class InvertedIndex {
public:
    InvertedIndex(Vocabulary query_vocab, std::vector<std::string> doc_ids,
                  std::vector<std::vector<Posting>> postings, IndexMetadata metadata);

    const Vocabulary& query_vocab() const { return vocab_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const std::vector<std::vector<Posting>>& postings() const { return postings_; }
    const std::vector<Posting>& postings_for(std::uint32_t token_id) const {
        return postings_.at(token_id);
    }
    const IndexMetadata& metadata() const { return meta_; }

    std::uint64_t total_postings() const;

    /// Binary layout: magic "PSQIDX01"; u64 LE vocab count, doc count, total
    /// postings; vocab tokens then doc ids as (u32 LE length, UTF-8 bytes);
    /// per token id a u64 LE list length followed by (u32 LE ordinal, f64 LE
    /// weight) pairs in postings order; u64 LE trailer length and a JSON
    /// metadata trailer.
    std::string serialize() const;
    static InvertedIndex deserialize(std::string_view bytes);

    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

private:
    Vocabulary vocab_;
    std::vector<std::string> doc_ids_;
    std::vector<std::vector<Posting>> postings_; // indexed by token id
    IndexMetadata meta_;
};

struct IndexSize {
    std::uint64_t bytes = 0;
    std::uint64_t total_postings = 0;
};

/// Exact serialized byte count and total posting count; the byte count is
/// what save() writes.
IndexSize index_size(const InvertedIndex& index);

} // namespace psq
