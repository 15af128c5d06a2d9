// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/unigram_lm.hpp"

#include <stdexcept>

namespace psq {

void UnigramLMBuilder::add(const TokenSequence& tokens) {
    for (const auto& t : tokens)
        add(t);
}

void UnigramLMBuilder::add(const std::string& token) {
    ++counts_[token];
    ++total_;
}

UnigramLM UnigramLMBuilder::build(double floor) const {
    if (total_ == 0)
        throw std::invalid_argument("empty token stream for unigram LM");
    if (!(floor > 0.0))
        throw std::invalid_argument("unigram LM floor must be positive");
    UnigramLM lm;
    lm.floor_ = floor;
    for (const auto& [token, count] : counts_)
        lm.probs_[token] = static_cast<double>(count) / static_cast<double>(total_);
    return lm;
}

UnigramLM build_unigram_lm(const TokenSequence& corpus_tokens, double floor) {
    UnigramLMBuilder builder;
    builder.add(corpus_tokens);
    return builder.build(floor);
}

} // namespace psq
