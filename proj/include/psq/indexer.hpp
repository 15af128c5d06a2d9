// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psq/inverted_index.hpp"
#include "psq/textprep.hpp"
#include "psq/translation_table.hpp"
#include "psq/unigram_lm.hpp"
#include "psq/vocabulary.hpp"

namespace psq {

/// Translated probabilities below this are dropped before weighting; the
/// resulting weights are indistinguishable from zero at double precision.
inline constexpr double kTranslatedProbFloor = 1e-10;

struct Document {
    std::string id;
    TokenSequence tokens; // already normalized
};

/// Sparse term-frequency vector; entries keep first-encounter order so the
/// projection accumulates in a fixed order.
struct DocumentVector {
    std::string doc_id;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries; // (source id, tf)
    std::uint64_t length = 0;                                     // |D|, total token count
};

/// P(w_T | D_S) per query-language token id, entries in first-encounter order.
struct TranslatedDocVector {
    std::string doc_id;
    std::vector<std::pair<std::uint32_t, double>> entries;

    double probability_for(std::uint32_t query_token_id) const {
        for (const auto& [id, p] : entries)
            if (id == query_token_id)
                return p;
        return 0.0;
    }
};

struct SmoothingConfig {
    double alpha = 0.5; // Jelinek-Mercer mixing weight, strictly inside (0,1)

    void validate() const;
};

DocumentVector vectorize(std::string doc_id, const TokenSequence& tokens,
                         Vocabulary& source_vocab);

/// Projects a document through the translation table:
/// P(w_T | D) = sum over source tokens of P(w_T | w_S) * tf(w_S) / |D|.
/// Source tokens absent from the table contribute nothing. New target tokens
/// are interned into `query_vocab` in first-encounter order.
TranslatedDocVector translate_document(const DocumentVector& doc, const Vocabulary& source_vocab,
                                       const TranslationTable& table, Vocabulary& query_vocab);

/// log[ (1-alpha) p_doc / (alpha p_bg) + 1 ], natural log; exactly 0 when
/// p_doc is 0. Throws std::invalid_argument when p_bg <= 0 or p_doc < 0.
double term_weight(double p_doc, double p_bg, const SmoothingConfig& cfg);

/// Builds the full index: vectorize, translate, weight, merge in chunks of
/// `chunk_size` documents. The serialized result is byte-identical for any
/// chunk size. Throws on duplicate doc ids and on an empty document stream.
/// `provenance` supplies the metadata trailer; alpha and version are filled
/// in from `smoothing` and the library version.
InvertedIndex build_index(std::span<const Document> docs, const TranslationTable& table,
                          const UnigramLM& lm, const SmoothingConfig& smoothing,
                          std::size_t chunk_size, IndexMetadata provenance = {});

/// JSON-lines documents: one object per line with string fields `id` and
/// `text`; text is normalized with `cfg`.
std::vector<Document> load_documents_jsonl(const std::string& path, const TokenizerConfig& cfg);

} // namespace psq
