// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace psq {

struct TableEntry {
    std::string target;
    double prob = 0.0;

    friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Sparse conditional distribution P(target token | source token).
///
/// Each per-source list is kept sorted by probability descending, ties broken
/// by target token ascending (byte order). All stored probabilities are
/// strictly positive; per-source sums never exceed 1 + 1e-9, and equal 1
/// within 1e-9 right after estimation or renormalization.
class TranslationTable {
public:
    using EntryList = std::vector<TableEntry>;
    using EntryMap = std::map<std::string, EntryList>;

    TranslationTable() = default;

    /// Takes per-source distributions, drops non-positive probabilities,
    /// establishes the sort order, and validates the sum invariant.
    static TranslationTable from_distributions(EntryMap entries);

    const EntryMap& entries() const { return entries_; }
    const EntryList* find(const std::string& source) const;

    std::size_t source_count() const { return entries_.size(); }
    std::size_t entry_count() const;
    double total_mass() const;

    std::set<std::string> source_vocab() const;
    std::set<std::string> target_vocab() const;

    friend bool operator==(const TranslationTable&, const TranslationTable&) = default;

    /// Sort an entry list into canonical order: probability descending,
    /// ties by target token ascending.
    static void sort_entries(EntryList& list);

private:
    EntryMap entries_;
};

/// TSV round trip: `source<TAB>target<TAB>probability`, lines grouped by
/// source (ascending), descending probability within a group, probabilities
/// printed with 12 significant digits.
TranslationTable load_table(const std::string& path);
void save_table(const TranslationTable& table, const std::string& path);
std::string serialize_table(const TranslationTable& table);

} // namespace psq
