// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "psq/textprep.hpp"
#include "psq/translation_table.hpp"

namespace psq {

/// Sentence-aligned bilingual text; source side is the document language,
/// target side is the query language. Every pair has at least one token on
/// each side.
struct ParallelCorpus {
    std::vector<std::pair<TokenSequence, TokenSequence>> pairs;
};

/// Nonnegative co-occurrence mass per (source, target) word pair.
struct AlignmentCounts {
    std::map<std::string, std::map<std::string, double>> counts; // source -> target -> mass

    void add(const std::string& source, const std::string& target, double mass = 1.0);
    bool empty() const { return counts.empty(); }
};

/// IBM Model 1 EM over a parallel corpus; probabilities are target given
/// source, initialized uniformly over the targets observed with each source
/// token. No NULL word. Probabilities below 1e-12 after the final iteration
/// are dropped.
///
/// If `iteration_loglik` is non-null it receives the corpus log-likelihood
/// under the parameters entering each iteration (so it is non-decreasing).
TranslationTable train_model1(const ParallelCorpus& corpus, int iterations,
                              std::vector<double>* iteration_loglik = nullptr);

/// Corpus log-likelihood under a fixed table:
/// sum over pairs and target tokens of log[(1/I) * sum_i P(t | s_i)].
double model1_log_likelihood(const ParallelCorpus& corpus, const TranslationTable& table);

using AlignedPair = std::pair<std::string, std::string>; // (source, target)

/// Count occurrences of aligned word pairs. Concatenating the outputs of
/// several aligners before this call combines them: shared pairs accumulate
/// mass from every aligner.
AlignmentCounts counts_from_alignments(const std::vector<AlignedPair>& aligned_pairs);

/// Maximum-likelihood normalization per source token. Source tokens with
/// zero total mass are omitted, as are zero-count targets.
TranslationTable normalize_counts(const AlignmentCounts& counts);

/// Two files of equal line count (source, target), tokens normalized with the
/// per-side configs; or a single TSV `source_sentence<TAB>target_sentence`.
/// Pairs that are empty on either side after normalization are skipped.
ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path,
                                    const TokenizerConfig& source_cfg,
                                    const TokenizerConfig& target_cfg);
ParallelCorpus load_parallel_tsv(const std::string& path, const TokenizerConfig& source_cfg,
                                 const TokenizerConfig& target_cfg);

} // namespace psq
