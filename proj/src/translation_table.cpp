// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/translation_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "format_util.hpp"
#include "psq/errors.hpp"
#include "psq/textprep.hpp"

namespace psq {

namespace {
constexpr double kSumSlack = 1e-9;
constexpr int kProbDigits = 12;
} // namespace

void TranslationTable::sort_entries(EntryList& list) {
    std::sort(list.begin(), list.end(), [](const TableEntry& a, const TableEntry& b) {
        if (a.prob != b.prob)
            return a.prob > b.prob;
        return a.target < b.target;
    });
}

TranslationTable TranslationTable::from_distributions(EntryMap entries) {
    TranslationTable table;
    for (auto& [source, list] : entries) {
        EntryList kept;
        kept.reserve(list.size());
        double sum = 0.0;
        std::set<std::string_view> seen;
        for (auto& e : list) {
            if (e.prob <= 0.0)
                continue;
            if (!seen.insert(e.target).second)
                throw std::invalid_argument("duplicate target '" + e.target + "' for source '" +
                                            source + "'");
            sum += e.prob;
            kept.push_back(std::move(e));
        }
        if (kept.empty())
            continue;
        if (sum > 1.0 + kSumSlack)
            throw std::invalid_argument("probabilities for source '" + source +
                                        "' sum to " + detail::format_sig(sum, 17));
        sort_entries(kept);
        table.entries_.emplace(source, std::move(kept));
    }
    return table;
}

const TranslationTable::EntryList* TranslationTable::find(const std::string& source) const {
    auto it = entries_.find(source);
    return it == entries_.end() ? nullptr : &it->second;
}

std::size_t TranslationTable::entry_count() const {
    std::size_t n = 0;
    for (const auto& [source, list] : entries_)
        n += list.size();
    return n;
}

double TranslationTable::total_mass() const {
    double mass = 0.0;
    for (const auto& [source, list] : entries_)
        for (const auto& e : list)
            mass += e.prob;
    return mass;
}

std::set<std::string> TranslationTable::source_vocab() const {
    std::set<std::string> vocab;
    for (const auto& [source, list] : entries_)
        vocab.insert(source);
    return vocab;
}

std::set<std::string> TranslationTable::target_vocab() const {
    std::set<std::string> vocab;
    for (const auto& [source, list] : entries_)
        for (const auto& e : list)
            vocab.insert(e.target);
    return vocab;
}

std::string serialize_table(const TranslationTable& table) {
    std::string out;
    for (const auto& [source, list] : table.entries()) {
        for (const auto& e : list) {
            out += source;
            out += '\t';
            out += e.target;
            out += '\t';
            out += detail::format_sig(e.prob, kProbDigits);
            out += '\n';
        }
    }
    return out;
}

void save_table(const TranslationTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_table(table);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

TranslationTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open translation table: " + path);

    TranslationTable::EntryMap entries;
    std::map<std::string, std::set<std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos)
            throw ParseError(path, lineno, "expected source<TAB>target<TAB>probability");

        std::string source = line.substr(0, tab1);
        std::string target = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string prob_text = line.substr(tab2 + 1);
        if (source.empty() || target.empty())
            throw ParseError(path, lineno, "empty token");
        utf8_decode(source);
        utf8_decode(target);

        char* end = nullptr;
        const double prob = std::strtod(prob_text.c_str(), &end);
        if (end != prob_text.c_str() + prob_text.size() || prob_text.empty())
            throw ParseError(path, lineno, "non-numeric probability '" + prob_text + "'");
        if (!(prob > 0.0) || prob > 1.0)
            throw ParseError(path, lineno, "probability out of (0,1]: " + prob_text);

        if (!seen[source].insert(target).second)
            throw ParseError(path, lineno, "duplicate pair (" + source + ", " + target + ")");
        entries[source].push_back({std::move(target), prob});
    }

    try {
        return TranslationTable::from_distributions(std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, lineno, e.what());
    }
}

} // namespace psq
