// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "psq/errors.hpp"
#include "psq/textprep.hpp"

using namespace psq;

namespace {

TokenizerConfig all_on(std::set<std::string> stopwords = {}) {
    TokenizerConfig cfg;
    cfg.stopwords = std::move(stopwords);
    return cfg;
}

TokenizerConfig all_off() {
    return {false, false, false, {}, ""};
}

} // namespace

TEST_CASE("tokenize applies the five stages in order") {
    CHECK(tokenize("The Caf\xc3\xa9, open!", all_on({"the"})) ==
          TokenSequence{"cafe", "open"});
}

TEST_CASE("tokenize of empty input is empty") {
    CHECK(tokenize("", all_on()) == TokenSequence{});
    CHECK(tokenize("   \t\n  ", all_on()) == TokenSequence{});
}

TEST_CASE("tokenize with all flags off is whitespace splitting") {
    CHECK(tokenize("abc", all_off()) == TokenSequence{"abc"});
    CHECK(tokenize("A b. C\xc3\xa9!", all_off()) == TokenSequence{"A", "b.", "C\xc3\xa9!"});
}

TEST_CASE("punctuation-only tokens are dropped") {
    CHECK(tokenize("hello , - !!! world", all_on()) == TokenSequence{"hello", "world"});
}

TEST_CASE("diacritics strip covers precomposed and combining forms") {
    // U+00E9 (precomposed) and U+0065 U+0301 (decomposed) both become "e".
    CHECK(tokenize("caf\xc3\xa9 cafe\xcc\x81", all_on()) == TokenSequence{"cafe", "cafe"});
    TokenizerConfig keep = all_on();
    keep.strip_diacritics = false;
    CHECK(tokenize("caf\xc3\xa9", keep) == TokenSequence{"caf\xc3\xa9"});
}

TEST_CASE("stopword removal happens after lowercasing") {
    CHECK(tokenize("The THE the", all_on({"the"})) == TokenSequence{});
    // lowercase off: tokens keep their case and only exact matches drop
    TokenizerConfig cfg = all_on({"the"});
    cfg.lowercase = false;
    CHECK(tokenize("The the", cfg) == TokenSequence{"The"});
}

TEST_CASE("unicode whitespace separates tokens") {
    // U+3000 ideographic space, U+00A0 no-break space
    CHECK(tokenize("a\xe3\x80\x80\x62\xc2\xa0racecar", all_off()) ==
          TokenSequence{"a", "b", "racecar"});
}

TEST_CASE("fullwidth and cyrillic case folding") {
    CHECK(tokenize("\xd0\x9c\xd0\xbe\xd1\x81\xd0\xba\xd0\xb2\xd0\xb0", all_on()) ==
          TokenSequence{"\xd0\xbc\xd0\xbe\xd1\x81\xd0\xba\xd0\xb2\xd0\xb0"}); // Москва → москва
}

TEST_CASE("invalid UTF-8 raises a decode error") {
    CHECK_THROWS_AS(tokenize("ok \xff\xfe", all_on()), DecodeError);
    CHECK_THROWS_AS(tokenize("trunc \xc3", all_on()), DecodeError);
    CHECK_THROWS_AS(tokenize("overlong \xc0\xaf", all_on()), DecodeError);
}

TEST_CASE("tokenize is deterministic and bounded by word count") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(0, 40);
    std::uniform_int_distribution<int> ch(0, 9);
    const char* pieces[] = {"a", "B", ".", "\xc3\xa9", " ", "\t", "Z!", "\xd0\x96", ",", "x9"};
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        for (int i = 0, n = len(rng); i < n; ++i)
            text += pieces[ch(rng)];
        const auto once = tokenize(text, all_on({"b"}));
        const auto twice = tokenize(text, all_on({"b"}));
        CHECK(once == twice);

        std::istringstream ws(text);
        std::size_t words = 0;
        std::string w;
        while (ws >> w)
            ++words;
        CHECK(once.size() <= words);
        for (const auto& tok : once) {
            CHECK(!tok.empty());
            CHECK(tok.find(' ') == std::string::npos);
            CHECK(tok.find('\t') == std::string::npos);
        }
    }
}

TEST_CASE("stopword files ignore comments and blank lines") {
    const std::string path = "test_stopwords.txt";
    {
        std::ofstream out(path, std::ios::binary);
        out << "# comment\nthe\n\nof\r\n# trailing\n";
    }
    const auto words = load_stopwords(path);
    CHECK(words == std::set<std::string>{"the", "of"});
    std::remove(path.c_str());
}
