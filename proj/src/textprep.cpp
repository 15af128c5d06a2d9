// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/textprep.hpp"

#include <algorithm>
#include <fstream>

#include "psq/errors.hpp"

namespace psq {
namespace {

struct CpMapping {
    char32_t cp;
    const char* replacement; // UTF-8, already fully decomposed
};

struct CpRange {
    char32_t lo;
    char32_t hi;
};

#include "unicode_tables.inc"

template <std::size_t N>
bool in_ranges(const CpRange (&ranges)[N], char32_t cp) {
    auto it = std::upper_bound(std::begin(ranges), std::end(ranges), cp,
                               [](char32_t c, const CpRange& r) { return c < r.lo; });
    return it != std::begin(ranges) && cp <= std::prev(it)->hi;
}

template <std::size_t N>
const char* map_lookup(const CpMapping (&table)[N], char32_t cp) {
    auto it = std::lower_bound(std::begin(table), std::end(table), cp,
                               [](const CpMapping& m, char32_t c) { return m.cp < c; });
    if (it != std::end(table) && it->cp == cp)
        return it->replacement;
    return nullptr;
}

bool is_whitespace(char32_t cp) {
    return in_ranges(kWhitespaceRanges, cp);
}

void append_utf8_cps(const char* utf8, std::vector<char32_t>& out) {
    for (char32_t cp : utf8_decode(utf8))
        out.push_back(cp);
}

std::vector<char32_t> fold_case(const std::vector<char32_t>& cps) {
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(cp >= U'A' && cp <= U'Z' ? cp + 0x20 : cp);
        } else if (const char* rep = map_lookup(kLowercaseMap, cp)) {
            append_utf8_cps(rep, out);
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

std::vector<char32_t> strip_marks(const std::vector<char32_t>& cps) {
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (in_ranges(kCombiningMarkRanges, cp))
            continue;
        if (const char* rep = map_lookup(kStripMarksMap, cp)) {
            append_utf8_cps(rep, out);
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

} // namespace

std::vector<char32_t> utf8_decode(std::string_view text) {
    std::vector<char32_t> cps;
    cps.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::size_t len;
        char32_t cp;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            throw DecodeError("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + len > text.size())
            throw DecodeError("truncated UTF-8 sequence at offset " + std::to_string(i));
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80)
                throw DecodeError("invalid UTF-8 continuation byte at offset " +
                                  std::to_string(i + k));
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLen[len])
            throw DecodeError("overlong UTF-8 encoding at offset " + std::to_string(i));
        if (cp >= 0xD800 && cp <= 0xDFFF)
            throw DecodeError("UTF-8 encoded surrogate at offset " + std::to_string(i));
        if (cp > 0x10FFFF)
            throw DecodeError("codepoint out of range at offset " + std::to_string(i));
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

void utf8_encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

TokenSequence tokenize(std::string_view text, const TokenizerConfig& cfg) {
    const std::vector<char32_t> cps = utf8_decode(text);

    TokenSequence tokens;
    std::vector<char32_t> raw;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_whitespace(cps[i]))
            ++i;
        raw.clear();
        while (i < cps.size() && !is_whitespace(cps[i]))
            raw.push_back(cps[i++]);
        if (raw.empty())
            continue;

        std::vector<char32_t> cur = cfg.lowercase ? fold_case(raw) : raw;
        if (cfg.strip_diacritics)
            cur = strip_marks(cur);
        if (cfg.strip_punctuation) {
            cur.erase(std::remove_if(cur.begin(), cur.end(),
                                     [](char32_t cp) { return in_ranges(kPunctuationRanges, cp); }),
                      cur.end());
        }
        if (cur.empty())
            continue;

        std::string token;
        for (char32_t cp : cur)
            utf8_encode(cp, token);
        if (cfg.stopwords.count(token))
            continue;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open stopword file: " + path);
    std::set<std::string> words;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        utf8_decode(line); // validate
        words.insert(line);
    }
    return words;
}

} // namespace psq
