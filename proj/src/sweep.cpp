// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iostream>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "format_util.hpp"

namespace psq {

SweepGrid SweepGrid::default_grid() {
    SweepGrid grid;
    grid.pmf_values = {0.0, 0.05, 0.01, 0.001, 0.0001, 0.00001};
    grid.cdf_values = {0.800, 0.900, 0.950, 0.960, 0.965, 0.970, 0.975, 0.980, 0.990, 1.000};
    grid.topk_values = {2, 4, 8, 16, 32, 64, 128, kNoTopK};
    grid.alpha = 0.5;
    return grid;
}

void SweepGrid::validate() const {
    if (pmf_values.empty() || cdf_values.empty() || topk_values.empty())
        throw std::invalid_argument("sweep grid has an empty axis");
    for (double pmf : pmf_values)
        for (double cdf : cdf_values)
            for (std::uint64_t topk : topk_values)
                PruningConfig{pmf, cdf, topk, false}.validate();
    SmoothingConfig{alpha}.validate();
}

nlohmann::json SweepGrid::to_json() const {
    nlohmann::json topk = nlohmann::json::array();
    for (auto k : topk_values) {
        if (k == kNoTopK)
            topk.push_back("inf");
        else
            topk.push_back(k);
    }
    return {{"pmf", pmf_values}, {"cdf", cdf_values}, {"topk", topk}, {"alpha", alpha}};
}

SweepGrid SweepGrid::from_json(const nlohmann::json& j) {
    SweepGrid grid;
    grid.pmf_values = j.at("pmf").get<std::vector<double>>();
    grid.cdf_values = j.at("cdf").get<std::vector<double>>();
    for (const auto& k : j.at("topk")) {
        if (k.is_string())
            grid.topk_values.push_back(parse_top_k(k.get<std::string>()));
        else
            grid.topk_values.push_back(k.get<std::uint64_t>());
    }
    grid.alpha = j.at("alpha").get<double>();
    grid.validate();
    return grid;
}

SweepGrid load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open grid file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return SweepGrid::from_json(j);
}

namespace {

std::vector<PruningConfig> enumerate_cells(const SweepGrid& grid) {
    std::vector<PruningConfig> cells;
    cells.reserve(grid.size());
    for (double pmf : grid.pmf_values)
        for (double cdf : grid.cdf_values)
            for (std::uint64_t topk : grid.topk_values)
                cells.push_back({pmf, cdf, topk, false});
    return cells;
}

SweepPoint run_cell(const SweepInputs& in, const PruningConfig& cell, double alpha) {
    const auto start = std::chrono::steady_clock::now();

    const TranslationTable pruned = prune(*in.table, cell);
    IndexMetadata provenance = in.provenance;
    provenance.pruning = cell;
    const InvertedIndex index = build_index(in.docs, pruned, *in.lm, SmoothingConfig{alpha},
                                            in.chunk_size, std::move(provenance));
    const IndexSize size = index_size(index);

    std::vector<RankedList> runs;
    runs.reserve(in.queries.size());
    for (const auto& query : in.queries)
        runs.push_back(search(index, query, in.depth));
    const EvalReport report = evaluate(runs, *in.qrels, in.recall_cutoff);

    SweepPoint point;
    point.config = cell;
    point.index_bytes = size.bytes;
    point.total_postings = size.total_postings;
    point.map = report.mean_average_precision;
    point.r_at_100 = report.mean_recall;
    point.build_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    return point;
}

std::string describe(const PruningConfig& cfg) {
    return "pmf_min=" + detail::format_sig(cfg.pmf_min, 12) +
           " cdf_max=" + detail::format_sig(cfg.cdf_max, 12) +
           " top_k=" + format_top_k(cfg.top_k);
}

} // namespace

std::vector<SweepPoint> run_sweep(const SweepInputs& inputs_in, const SweepGrid& grid) {
    grid.validate();
    if (!inputs_in.table || !inputs_in.lm || !inputs_in.qrels)
        throw std::invalid_argument("sweep inputs incomplete");

    // Drop unjudged queries once instead of re-warning in every cell.
    std::vector<Query> judged;
    judged.reserve(inputs_in.queries.size());
    for (const auto& q : inputs_in.queries) {
        if (inputs_in.qrels->judgments().count(q.query_id))
            judged.push_back(q);
        else
            std::cerr << "warning: query " << q.query_id << " has no judgments; skipped\n";
    }
    SweepInputs inputs = inputs_in;
    inputs.queries = judged;

    const std::vector<PruningConfig> cells = enumerate_cells(grid);
    std::vector<SweepPoint> points(cells.size());

    std::size_t workers = inputs.workers;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cells.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(cells.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size())
                    return;
                try {
                    points[i] = run_cell(inputs, cells[i], grid.alpha);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i])
            continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep cell (" + describe(cells[i]) +
                                     ") failed: " + e.what());
        }
    }
    return points;
}

double metric_of(const SweepPoint& p, SweepMetric m) {
    return m == SweepMetric::map ? p.map : p.r_at_100;
}

std::uint64_t size_of(const SweepPoint& p, SizeAxis a) {
    return a == SizeAxis::postings ? p.total_postings : p.index_bytes;
}

ParetoResult pareto_frontier(std::span<const SweepPoint> points, SweepMetric metric,
                             SizeAxis size_axis) {
    if (points.empty())
        throw std::invalid_argument("no sweep points");

    // Sort by size; a point survives iff its metric strictly exceeds every
    // strictly-smaller size's best and matches its own size group's best.
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return size_of(points[a], size_axis) < size_of(points[b], size_axis);
    });

    std::vector<bool> on_frontier(points.size(), false);
    double best_smaller = -1.0; // best metric among strictly smaller sizes
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        const std::uint64_t group_size = size_of(points[order[i]], size_axis);
        double group_best = -1.0;
        while (j < order.size() && size_of(points[order[j]], size_axis) == group_size) {
            group_best = std::max(group_best, metric_of(points[order[j]], metric));
            ++j;
        }
        if (group_best > best_smaller)
            for (std::size_t k = i; k < j; ++k)
                if (metric_of(points[order[k]], metric) == group_best)
                    on_frontier[order[k]] = true;
        best_smaller = std::max(best_smaller, group_best);
        i = j;
    }

    ParetoResult result;
    for (std::size_t k : order) {
        if (on_frontier[k])
            result.frontier.push_back(points[k]);
    }
    for (std::size_t k = 0; k < points.size(); ++k)
        if (!on_frontier[k])
            result.dominated.push_back(points[k]);
    return result;
}

namespace {

constexpr const char* kPointsHeader =
    "pmf,cdf,topk,renormalize,index_bytes,total_postings,map,r_at_100,build_seconds\n";

std::string csv_row(const SweepPoint& p) {
    std::string row;
    row += detail::format_sig(p.config.pmf_min, 12);
    row += ',';
    row += detail::format_sig(p.config.cdf_max, 12);
    row += ',';
    row += format_top_k(p.config.top_k);
    row += ',';
    row += p.config.renormalize ? "true" : "false";
    row += ',';
    row += std::to_string(p.index_bytes);
    row += ',';
    row += std::to_string(p.total_postings);
    row += ',';
    row += detail::format_sig(p.map, 12);
    row += ',';
    row += detail::format_sig(p.r_at_100, 12);
    row += ',';
    row += detail::format_sig(p.build_seconds, 6);
    row += '\n';
    return row;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::string format_axis_value(double v) {
    return detail::format_sig(v, 12);
}
std::string format_axis_value(std::uint64_t v) {
    return format_top_k(v);
}

// One heatmap per statistic for a knob pair, the remaining knob held at its
// loosest value present in the sweep (smallest pmf, largest cdf and top-k).
template <typename RowT, typename ColT>
void write_heatmaps(const std::filesystem::path& dir, const std::string& stem,
                    std::span<const SweepPoint> points, RowT PruningConfig::* row_knob,
                    ColT PruningConfig::* col_knob,
                    bool (*held_filter)(const PruningConfig&, const PruningConfig&),
                    const PruningConfig& loosest) {
    std::vector<RowT> rows;
    std::vector<ColT> cols;
    for (const auto& p : points) {
        rows.push_back(p.config.*row_knob);
        cols.push_back(p.config.*col_knob);
    }
    rows = sorted_unique(std::move(rows));
    cols = sorted_unique(std::move(cols));

    const std::vector<std::pair<std::string, std::function<std::string(const SweepPoint&)>>>
        stats = {
            {"r_at_100", [](const SweepPoint& p) { return detail::format_sig(p.r_at_100, 12); }},
            {"map", [](const SweepPoint& p) { return detail::format_sig(p.map, 12); }},
            {"index_bytes", [](const SweepPoint& p) { return std::to_string(p.index_bytes); }},
            {"total_postings",
             [](const SweepPoint& p) { return std::to_string(p.total_postings); }},
        };

    for (const auto& [stat_name, stat] : stats) {
        std::string out = stem;
        for (const auto& c : cols) {
            out += '\t';
            out += format_axis_value(c);
        }
        out += '\n';
        for (const auto& r : rows) {
            out += format_axis_value(r);
            for (const auto& c : cols) {
                const SweepPoint* cell = nullptr;
                for (const auto& p : points) {
                    if (p.config.*row_knob == r && p.config.*col_knob == c &&
                        held_filter(p.config, loosest)) {
                        cell = &p;
                        break;
                    }
                }
                out += '\t';
                out += cell ? stat(*cell) : "";
            }
            out += '\n';
        }
        write_file(dir / ("heatmap_" + stem + "." + stat_name + ".tsv"), out);
    }
}

} // namespace

void emit_analysis(std::span<const SweepPoint> points, const ParetoResult& pareto,
                   const std::string& out_dir, SweepMetric metric, SizeAxis size_axis) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::string points_csv = kPointsHeader;
    for (const auto& p : points)
        points_csv += csv_row(p);
    write_file(dir / "points.csv", points_csv);

    std::string frontier_csv = kPointsHeader;
    for (const auto& p : pareto.frontier)
        frontier_csv += csv_row(p);
    write_file(dir / "frontier.csv", frontier_csv);

    std::string series = "size\tmetric\n";
    for (const auto& p : pareto.frontier) {
        series += std::to_string(size_of(p, size_axis));
        series += '\t';
        series += detail::format_sig(metric_of(p, metric), 12);
        series += '\n';
    }
    write_file(dir / "frontier_series.tsv", series);

    PruningConfig loosest;
    loosest.pmf_min = std::numeric_limits<double>::infinity();
    loosest.cdf_max = 0.0;
    loosest.top_k = 0;
    for (const auto& p : points) {
        loosest.pmf_min = std::min(loosest.pmf_min, p.config.pmf_min);
        loosest.cdf_max = std::max(loosest.cdf_max, p.config.cdf_max);
        loosest.top_k = std::max(loosest.top_k, p.config.top_k);
    }

    write_heatmaps<std::uint64_t, double>(
        dir, "topk_cdf", points, &PruningConfig::top_k, &PruningConfig::cdf_max,
        [](const PruningConfig& c, const PruningConfig& l) { return c.pmf_min == l.pmf_min; },
        loosest);
    write_heatmaps<double, std::uint64_t>(
        dir, "pmf_topk", points, &PruningConfig::pmf_min, &PruningConfig::top_k,
        [](const PruningConfig& c, const PruningConfig& l) { return c.cdf_max == l.cdf_max; },
        loosest);
    write_heatmaps<double, double>(
        dir, "pmf_cdf", points, &PruningConfig::pmf_min, &PruningConfig::cdf_max,
        [](const PruningConfig& c, const PruningConfig& l) { return c.top_k == l.top_k; },
        loosest);
}

} // namespace psq
