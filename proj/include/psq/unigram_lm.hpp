// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "psq/textprep.hpp"
#include "psq/vocabulary.hpp"

namespace psq {

/// Smoothed query-language background model P(w | G). Lookups never return
/// zero: unseen tokens fall back to a positive floor.
class UnigramLM {
public:
    UnigramLM() = default;

    double lookup(std::string_view token) const {
        auto it = probs_.find(token);
        return it == probs_.end() ? floor_ : it->second;
    }

    double floor() const { return floor_; }
    const TokenMap<double>& probabilities() const { return probs_; }

    friend class UnigramLMBuilder;

private:
    TokenMap<double> probs_;
    double floor_ = 1e-7;
};

/// Incremental counting over a token stream too large to hold at once.
class UnigramLMBuilder {
public:
    void add(const TokenSequence& tokens);
    void add(const std::string& token);

    /// Throws std::invalid_argument on an empty stream or non-positive floor.
    UnigramLM build(double floor) const;

private:
    std::map<std::string, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// P(w|G) = count(w)/total over the stream; unseen tokens return `floor`.
UnigramLM build_unigram_lm(const TokenSequence& corpus_tokens, double floor);

} // namespace psq
