// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "psq/evaluation.hpp"
#include "psq/indexer.hpp"
#include "psq/pruning.hpp"
#include "psq/search.hpp"

namespace psq {

/// Cartesian pruning grid; cells are enumerated pmf-major, then cdf, then
/// top-k, matching the points.csv column order.
struct SweepGrid {
    std::vector<double> pmf_values;
    std::vector<double> cdf_values;
    std::vector<std::uint64_t> topk_values;
    double alpha = 0.5;

    /// The 6 PMF x 10 CDF x 8 top-k grid (480 cells).
    static SweepGrid default_grid();

    std::size_t size() const {
        return pmf_values.size() * cdf_values.size() * topk_values.size();
    }
    void validate() const;

    nlohmann::json to_json() const;
    /// JSON with arrays `pmf`, `cdf`, `topk` (integers or "inf"), scalar `alpha`.
    static SweepGrid from_json(const nlohmann::json& j);
};

SweepGrid load_grid(const std::string& path);

struct SweepPoint {
    PruningConfig config;
    std::uint64_t index_bytes = 0;
    std::uint64_t total_postings = 0;
    double map = 0.0;
    double r_at_100 = 0.0;
    double build_seconds = 0.0; // informational, excluded from determinism claims
};

struct SweepInputs {
    std::span<const Document> docs;
    const TranslationTable* table = nullptr;
    const UnigramLM* lm = nullptr;
    std::span<const Query> queries;
    const Qrels* qrels = nullptr;
    IndexMetadata provenance{};     // alpha/pruning overwritten per cell
    std::size_t chunk_size = 1024;
    std::size_t depth = 1000;
    std::size_t recall_cutoff = 100;
    std::size_t workers = 0;        // 0 = hardware concurrency
};

/// One point per grid cell: prune, build, measure, retrieve, evaluate.
/// Cells run on a bounded worker pool; results are ordered by grid cell, so
/// output is independent of scheduling. A failing cell aborts the sweep with
/// the offending config named.
std::vector<SweepPoint> run_sweep(const SweepInputs& inputs, const SweepGrid& grid);

enum class SweepMetric { r_at_100, map };
enum class SizeAxis { bytes, postings };

double metric_of(const SweepPoint& p, SweepMetric m);
std::uint64_t size_of(const SweepPoint& p, SizeAxis a);

/// Non-dominated set under (minimize size, maximize metric); a point is
/// dominated when another has size <= and metric >= with one inequality
/// strict. Frontier is sorted by size ascending.
struct ParetoResult {
    std::vector<SweepPoint> frontier;
    std::vector<SweepPoint> dominated;
};

ParetoResult pareto_frontier(std::span<const SweepPoint> points, SweepMetric metric,
                             SizeAxis size_axis);

/// Writes points.csv, frontier.csv, per-knob-pair heatmap TSVs (the third
/// knob fixed at its loosest grid value), and frontier_series.tsv under
/// `out_dir`.
void emit_analysis(std::span<const SweepPoint> points, const ParetoResult& pareto,
                   const std::string& out_dir, SweepMetric metric = SweepMetric::r_at_100,
                   SizeAxis size_axis = SizeAxis::bytes);

} // namespace psq
