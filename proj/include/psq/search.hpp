// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <span>
#include <string>
#include <vector>

#include "psq/indexer.hpp"
#include "psq/inverted_index.hpp"
#include "psq/textprep.hpp"
#include "psq/unigram_lm.hpp"

namespace psq {

struct Query {
    std::string query_id;
    TokenSequence tokens;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Descending score; ties broken by document ordinal ascending.
struct RankedList {
    std::string query_id;
    std::vector<ScoredDoc> items;

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Sum of stored term weights over query token occurrences; documents with no
/// overlapping term score zero and are excluded. Query tokens absent from the
/// index vocabulary contribute nothing. Returns at most `depth` documents.
RankedList search(const InvertedIndex& index, const Query& query, std::size_t depth = 1000);

/// Element-wise search(); per-query failures yield an empty RankedList and a
/// warning on stderr.
std::vector<RankedList> batch_search(const InvertedIndex& index, std::span<const Query> queries,
                                     std::size_t depth = 1000);

/// Smoothed query-likelihood score computed densely:
/// sum over query token occurrences of log[ alpha P(w|G) + (1-alpha) P(w|D) ].
/// Differs from the sparse score by the query-only constant
/// sum of log(alpha P(w|G)), so rankings agree.
double dense_oracle_score(const Query& query, const TranslatedDocVector& doc,
                          const Vocabulary& query_vocab, const UnigramLM& lm,
                          const SmoothingConfig& cfg);

/// Query file: `query_id<TAB>query_text`, normalized with `cfg`.
std::vector<Query> load_queries(const std::string& path, const TokenizerConfig& cfg);

/// TREC run format: `query_id Q0 doc_id rank score run_tag`, rank from 1.
void save_run(const std::string& path, std::span<const RankedList> runs,
              const std::string& run_tag);
std::vector<RankedList> load_run(const std::string& path);

} // namespace psq
