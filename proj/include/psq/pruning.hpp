// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "psq/translation_table.hpp"

namespace psq {

/// Sentinel for an unrestricted top-k cap.
inline constexpr std::uint64_t kNoTopK = std::numeric_limits<std::uint64_t>::max();

std::string format_top_k(std::uint64_t top_k);      // "inf" for kNoTopK
std::uint64_t parse_top_k(const std::string& text); // accepts "inf"

/// Combined pruning criteria. Each criterion selects a prefix of the
/// descending-sorted translation list; the shortest prefix wins.
struct PruningConfig {
    double pmf_min = 0.0;           // keep entries with prob >= pmf_min
    double cdf_max = 1.0;           // keep smallest prefix with cumulative >= cdf_max;
                                    // exactly 1.0 disables the cutoff
    std::uint64_t top_k = kNoTopK;  // keep at most top_k entries
    bool renormalize = false;       // rescale kept probabilities to sum to 1

    /// Throws std::invalid_argument when outside the config domain
    /// (pmf_min in [0,1], cdf_max in (0,1], top_k >= 1).
    void validate() const;

    bool is_identity() const {
        return pmf_min == 0.0 && cdf_max == 1.0 && top_k == kNoTopK && !renormalize;
    }

    nlohmann::json to_json() const;
    static PruningConfig from_json(const nlohmann::json& j);

    friend bool operator==(const PruningConfig&, const PruningConfig&) = default;
};

TranslationTable prune(const TranslationTable& table, const PruningConfig& cfg);

struct PruneStats {
    std::size_t sources_before = 0;
    std::size_t sources_after = 0;
    std::size_t entries_before = 0;
    std::size_t entries_after = 0;
    double mean_translations_before = 0.0;
    double mean_translations_after = 0.0;
    std::size_t max_translations_before = 0;
    std::size_t max_translations_after = 0;
    double retained_mass = 0.0; // stored mass after / stored mass before

    nlohmann::json to_json() const;
};

PruneStats prune_stats(const TranslationTable& before, const TranslationTable& after);

} // namespace psq
