// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/alignment.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "psq/errors.hpp"

namespace psq {

namespace {

constexpr double kEmProbFloor = 1e-12; // numeric noise, dropped from the final table

class Interner {
public:
    std::uint32_t intern(const std::string& token) {
        auto [it, inserted] = ids_.emplace(token, static_cast<std::uint32_t>(tokens_.size()));
        if (inserted)
            tokens_.push_back(token);
        return it->second;
    }
    const std::string& token(std::uint32_t id) const { return tokens_[id]; }
    std::size_t size() const { return tokens_.size(); }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> tokens_;
};

struct IdCorpus {
    Interner sources;
    Interner targets;
    std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> pairs;
};

IdCorpus to_ids(const ParallelCorpus& corpus) {
    IdCorpus ids;
    ids.pairs.reserve(corpus.pairs.size());
    for (const auto& [src, tgt] : corpus.pairs) {
        if (src.empty() || tgt.empty())
            throw std::invalid_argument("parallel pair with an empty side");
        std::vector<std::uint32_t> s, t;
        s.reserve(src.size());
        t.reserve(tgt.size());
        for (const auto& w : src)
            s.push_back(ids.sources.intern(w));
        for (const auto& w : tgt)
            t.push_back(ids.targets.intern(w));
        ids.pairs.emplace_back(std::move(s), std::move(t));
    }
    return ids;
}

// t(target|source) restricted to co-occurring pairs; ordered map keyed by
// target id keeps every EM sweep deterministic.
using CondDist = std::vector<std::map<std::uint32_t, double>>;

CondDist uniform_init(const IdCorpus& corpus) {
    CondDist dist(corpus.sources.size());
    for (const auto& [src, tgt] : corpus.pairs)
        for (auto s : src)
            for (auto t : tgt)
                dist[s][t] = 0.0;
    for (auto& targets : dist) {
        const double u = 1.0 / static_cast<double>(targets.size());
        for (auto& [t, p] : targets)
            p = u;
    }
    return dist;
}

double sweep_log_likelihood(const IdCorpus& corpus, const CondDist& dist) {
    double ll = 0.0;
    for (const auto& [src, tgt] : corpus.pairs) {
        const double log_len = std::log(static_cast<double>(src.size()));
        for (auto t : tgt) {
            double denom = 0.0;
            for (auto s : src) {
                auto it = dist[s].find(t);
                if (it != dist[s].end())
                    denom += it->second;
            }
            ll += std::log(denom) - log_len;
        }
    }
    return ll;
}

} // namespace

TranslationTable train_model1(const ParallelCorpus& corpus, int iterations,
                              std::vector<double>* iteration_loglik) {
    if (corpus.pairs.empty())
        throw std::invalid_argument("empty parallel corpus");
    if (iterations < 1)
        throw std::invalid_argument("iterations must be >= 1");

    const IdCorpus ids = to_ids(corpus);
    CondDist dist = uniform_init(ids);
    if (iteration_loglik)
        iteration_loglik->clear();

    for (int iter = 0; iter < iterations; ++iter) {
        CondDist counts(ids.sources.size());
        std::vector<double> totals(ids.sources.size(), 0.0);
        double ll = 0.0;

        for (const auto& [src, tgt] : ids.pairs) {
            const double log_len = std::log(static_cast<double>(src.size()));
            for (auto t : tgt) {
                double denom = 0.0;
                for (auto s : src)
                    denom += dist[s].at(t);
                ll += std::log(denom) - log_len;
                for (auto s : src) {
                    const double delta = dist[s].at(t) / denom;
                    counts[s][t] += delta;
                    totals[s] += delta;
                }
            }
        }
        if (iteration_loglik)
            iteration_loglik->push_back(ll);

        for (std::size_t s = 0; s < counts.size(); ++s) {
            auto& out = dist[s];
            out.clear();
            for (const auto& [t, c] : counts[s])
                out[t] = c / totals[s];
        }
    }
    if (iteration_loglik)
        iteration_loglik->push_back(sweep_log_likelihood(ids, dist));

    TranslationTable::EntryMap entries;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        TranslationTable::EntryList list;
        for (const auto& [t, p] : dist[s])
            if (p >= kEmProbFloor)
                list.push_back({ids.targets.token(t), p});
        if (!list.empty())
            entries.emplace(ids.sources.token(static_cast<std::uint32_t>(s)), std::move(list));
    }
    return TranslationTable::from_distributions(std::move(entries));
}

double model1_log_likelihood(const ParallelCorpus& corpus, const TranslationTable& table) {
    double ll = 0.0;
    for (const auto& [src, tgt] : corpus.pairs) {
        const double log_len = std::log(static_cast<double>(src.size()));
        for (const auto& t : tgt) {
            double denom = 0.0;
            for (const auto& s : src) {
                if (const auto* list = table.find(s))
                    for (const auto& e : *list)
                        if (e.target == t)
                            denom += e.prob;
            }
            ll += std::log(denom) - log_len;
        }
    }
    return ll;
}

void AlignmentCounts::add(const std::string& source, const std::string& target, double mass) {
    if (mass < 0.0)
        throw std::invalid_argument("negative alignment mass");
    counts[source][target] += mass;
}

AlignmentCounts counts_from_alignments(const std::vector<AlignedPair>& aligned_pairs) {
    AlignmentCounts counts;
    for (const auto& [s, t] : aligned_pairs)
        counts.add(s, t);
    return counts;
}

TranslationTable normalize_counts(const AlignmentCounts& counts) {
    if (counts.empty())
        throw std::invalid_argument("empty alignment counts");
    TranslationTable::EntryMap entries;
    for (const auto& [source, targets] : counts.counts) {
        double total = 0.0;
        for (const auto& [t, c] : targets)
            total += c;
        if (total <= 0.0)
            continue;
        TranslationTable::EntryList list;
        for (const auto& [t, c] : targets)
            if (c > 0.0)
                list.push_back({t, c / total});
        entries.emplace(source, std::move(list));
    }
    return TranslationTable::from_distributions(std::move(entries));
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

} // namespace

ParallelCorpus load_parallel_corpus(const std::string& source_path, const std::string& target_path,
                                    const TokenizerConfig& source_cfg,
                                    const TokenizerConfig& target_cfg) {
    const auto src_lines = read_lines(source_path);
    const auto tgt_lines = read_lines(target_path);
    if (src_lines.size() != tgt_lines.size())
        throw std::runtime_error("line count mismatch: " + source_path + " has " +
                                 std::to_string(src_lines.size()) + " lines, " + target_path +
                                 " has " + std::to_string(tgt_lines.size()));
    ParallelCorpus corpus;
    for (std::size_t i = 0; i < src_lines.size(); ++i) {
        auto s = tokenize(src_lines[i], source_cfg);
        auto t = tokenize(tgt_lines[i], target_cfg);
        if (s.empty() || t.empty())
            continue;
        corpus.pairs.emplace_back(std::move(s), std::move(t));
    }
    return corpus;
}

ParallelCorpus load_parallel_tsv(const std::string& path, const TokenizerConfig& source_cfg,
                                 const TokenizerConfig& target_cfg) {
    ParallelCorpus corpus;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path, lineno, "expected source_sentence<TAB>target_sentence");
        auto s = tokenize(line.substr(0, tab), source_cfg);
        auto t = tokenize(line.substr(tab + 1), target_cfg);
        if (s.empty() || t.empty())
            continue;
        corpus.pairs.emplace_back(std::move(s), std::move(t));
    }
    return corpus;
}

} // namespace psq
