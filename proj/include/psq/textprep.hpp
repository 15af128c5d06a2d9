// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

using TokenSequence = std::vector<std::string>;

/// Normalization settings shared by corpus alignment, document indexing and
/// query processing. Translation-table tokens only match index tokens if the
/// same config is used everywhere.
struct TokenizerConfig {
    bool lowercase = true;
    bool strip_diacritics = true;
    bool strip_punctuation = true;
    std::set<std::string> stopwords;
    std::string language_tag;
};

/// Deterministic pipeline: whitespace split, case fold, diacritic strip,
/// punctuation strip, stopword removal. Empty tokens are dropped.
/// Throws DecodeError on invalid UTF-8.
TokenSequence tokenize(std::string_view text, const TokenizerConfig& cfg);

/// One token per line, UTF-8; '#'-prefixed comment lines and blanks ignored.
std::set<std::string> load_stopwords(const std::string& path);

/// Strict UTF-8 decoding (rejects overlong forms, surrogates, > U+10FFFF).
std::vector<char32_t> utf8_decode(std::string_view text);
void utf8_encode(char32_t cp, std::string& out);

} // namespace psq
