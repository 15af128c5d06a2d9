// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/pruning.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace psq {

std::string format_top_k(std::uint64_t top_k) {
    return top_k == kNoTopK ? "inf" : std::to_string(top_k);
}

std::uint64_t parse_top_k(const std::string& text) {
    if (text == "inf")
        return kNoTopK;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty())
        throw std::invalid_argument("top-k must be a positive integer or 'inf': " + text);
    if (v < 1)
        throw std::invalid_argument("top-k must be >= 1");
    return static_cast<std::uint64_t>(v);
}

void PruningConfig::validate() const {
    if (!(pmf_min >= 0.0 && pmf_min <= 1.0))
        throw std::invalid_argument("pmf_min must be in [0,1]");
    if (!(cdf_max > 0.0 && cdf_max <= 1.0))
        throw std::invalid_argument("cdf_max must be in (0,1]");
    if (top_k < 1)
        throw std::invalid_argument("top_k must be >= 1");
}

nlohmann::json PruningConfig::to_json() const {
    nlohmann::json j{{"pmf_min", pmf_min}, {"cdf_max", cdf_max}, {"renormalize", renormalize}};
    if (top_k == kNoTopK)
        j["top_k"] = "inf";
    else
        j["top_k"] = top_k;
    return j;
}

PruningConfig PruningConfig::from_json(const nlohmann::json& j) {
    PruningConfig cfg;
    cfg.pmf_min = j.at("pmf_min").get<double>();
    cfg.cdf_max = j.at("cdf_max").get<double>();
    const auto& tk = j.at("top_k");
    cfg.top_k = tk.is_string() ? parse_top_k(tk.get<std::string>()) : tk.get<std::uint64_t>();
    cfg.renormalize = j.at("renormalize").get<bool>();
    cfg.validate();
    return cfg;
}

TranslationTable prune(const TranslationTable& table, const PruningConfig& cfg) {
    cfg.validate();

    TranslationTable::EntryMap out;
    for (const auto& [source, list] : table.entries()) {
        const std::size_t n = list.size();

        std::size_t len_pmf = 0;
        while (len_pmf < n && list[len_pmf].prob >= cfg.pmf_min)
            ++len_pmf;

        // cdf_max == 1.0 keeps everything; tables may legitimately carry sums
        // a hair above 1, which would otherwise clip the tail.
        std::size_t len_cdf = n;
        if (cfg.cdf_max < 1.0) {
            double cum = 0.0;
            len_cdf = n;
            for (std::size_t i = 0; i < n; ++i) {
                cum += list[i].prob;
                if (cum >= cfg.cdf_max) {
                    len_cdf = i + 1;
                    break;
                }
            }
        }

        const std::size_t len_topk =
            cfg.top_k >= n ? n : static_cast<std::size_t>(cfg.top_k);

        const std::size_t keep = std::min({len_pmf, len_cdf, len_topk});
        if (keep == 0)
            continue;

        TranslationTable::EntryList kept(list.begin(),
                                         list.begin() + static_cast<std::ptrdiff_t>(keep));
        if (cfg.renormalize) {
            double sum = 0.0;
            for (const auto& e : kept)
                sum += e.prob;
            for (auto& e : kept)
                e.prob /= sum;
        }
        out.emplace(source, std::move(kept));
    }
    return TranslationTable::from_distributions(std::move(out));
}

PruneStats prune_stats(const TranslationTable& before, const TranslationTable& after) {
    PruneStats s;
    s.sources_before = before.source_count();
    s.sources_after = after.source_count();
    s.entries_before = before.entry_count();
    s.entries_after = after.entry_count();
    for (const auto& [source, list] : before.entries())
        s.max_translations_before = std::max(s.max_translations_before, list.size());
    for (const auto& [source, list] : after.entries())
        s.max_translations_after = std::max(s.max_translations_after, list.size());
    if (s.sources_before > 0)
        s.mean_translations_before =
            static_cast<double>(s.entries_before) / static_cast<double>(s.sources_before);
    if (s.sources_after > 0)
        s.mean_translations_after =
            static_cast<double>(s.entries_after) / static_cast<double>(s.sources_after);
    const double mass_before = before.total_mass();
    s.retained_mass = mass_before > 0.0 ? after.total_mass() / mass_before : 0.0;
    return s;
}

nlohmann::json PruneStats::to_json() const {
    return {{"sources_before", sources_before},
            {"sources_after", sources_after},
            {"entries_before", entries_before},
            {"entries_after", entries_after},
            {"mean_translations_before", mean_translations_before},
            {"mean_translations_after", mean_translations_after},
            {"max_translations_before", max_translations_before},
            {"max_translations_after", max_translations_after},
            {"retained_mass", retained_mass}};
}

} // namespace psq
