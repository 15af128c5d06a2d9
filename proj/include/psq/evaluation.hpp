// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "psq/search.hpp"

namespace psq {

/// TREC relevance judgments: (query_id, doc_id) -> grade, grades > 0 are
/// relevant.
class Qrels {
public:
    /// Throws std::invalid_argument on duplicate (query_id, doc_id) or
    /// negative grade.
    void add(const std::string& query_id, const std::string& doc_id, int grade);

    bool is_relevant(const std::string& query_id, const std::string& doc_id) const;
    std::size_t relevant_count(const std::string& query_id) const;
    const std::map<std::string, std::map<std::string, int>>& judgments() const {
        return judgments_;
    }

private:
    std::map<std::string, std::map<std::string, int>> judgments_;
};

/// TREC 4-column qrels: `query_id 0 doc_id grade`.
Qrels load_qrels(const std::string& path);

struct TopicMetrics {
    double average_precision = 0.0;
    double recall = 0.0; // recall at the evaluation cutoff

    friend bool operator==(const TopicMetrics&, const TopicMetrics&) = default;
};

struct EvalReport {
    std::map<std::string, TopicMetrics> per_topic; // only topics with judged-relevant docs
    double mean_average_precision = 0.0;
    double mean_recall = 0.0;
    std::size_t evaluated_topics = 0;
    std::size_t recall_cutoff = 100;

    nlohmann::json to_json() const;
    std::string to_table() const; // aligned-column text
};

/// AP over the full ranked list with denominator R_q (all judged-relevant);
/// recall at `recall_cutoff`. Topics with no judged-relevant document are
/// excluded; judged topics missing from `runs` score zero; runs for unjudged
/// query ids are skipped with a warning on stderr.
EvalReport evaluate(std::span<const RankedList> runs, const Qrels& qrels,
                    std::size_t recall_cutoff = 100);

struct Aggregate {
    double mean_average_precision = 0.0;
    double mean_recall = 0.0;
    std::size_t evaluated_topics = 0;
};

/// Pooled mean over the union of evaluated topics, i.e. a topic-count
/// weighted mean of the per-report means.
Aggregate microaverage(std::span<const EvalReport> reports);

} // namespace psq
