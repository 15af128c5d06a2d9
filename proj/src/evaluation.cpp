// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include "psq/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "psq/errors.hpp"

namespace psq {

void Qrels::add(const std::string& query_id, const std::string& doc_id, int grade) {
    if (grade < 0)
        throw std::invalid_argument("negative relevance grade");
    auto& docs = judgments_[query_id];
    if (!docs.emplace(doc_id, grade).second)
        throw std::invalid_argument("duplicate judgment (" + query_id + ", " + doc_id + ")");
}

bool Qrels::is_relevant(const std::string& query_id, const std::string& doc_id) const {
    auto it = judgments_.find(query_id);
    if (it == judgments_.end())
        return false;
    auto doc = it->second.find(doc_id);
    return doc != it->second.end() && doc->second > 0;
}

std::size_t Qrels::relevant_count(const std::string& query_id) const {
    auto it = judgments_.find(query_id);
    if (it == judgments_.end())
        return 0;
    std::size_t n = 0;
    for (const auto& [doc, grade] : it->second)
        if (grade > 0)
            ++n;
    return n;
}

Qrels load_qrels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open qrels: " + path);
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string qid, unused, did, grade_text, extra;
        if (!(fields >> qid >> unused >> did >> grade_text) || (fields >> extra))
            throw ParseError(path, lineno, "expected `query_id 0 doc_id grade`");
        char* end = nullptr;
        const long grade = std::strtol(grade_text.c_str(), &end, 10);
        if (end != grade_text.c_str() + grade_text.size())
            throw ParseError(path, lineno, "bad grade '" + grade_text + "'");
        try {
            qrels.add(qid, did, static_cast<int>(grade));
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, lineno, e.what());
        }
    }
    return qrels;
}

namespace {

TopicMetrics score_topic(const RankedList& run, const Qrels& qrels, std::size_t relevant_total,
                         std::size_t recall_cutoff) {
    TopicMetrics m;
    std::size_t relevant_found = 0;
    double ap_sum = 0.0;
    for (std::size_t i = 0; i < run.items.size(); ++i) {
        if (!qrels.is_relevant(run.query_id, run.items[i].doc_id))
            continue;
        ++relevant_found;
        ap_sum += static_cast<double>(relevant_found) / static_cast<double>(i + 1);
        if (i < recall_cutoff)
            m.recall += 1.0;
    }
    m.average_precision = ap_sum / static_cast<double>(relevant_total);
    m.recall /= static_cast<double>(relevant_total);
    return m;
}

} // namespace

EvalReport evaluate(std::span<const RankedList> runs, const Qrels& qrels,
                    std::size_t recall_cutoff) {
    if (recall_cutoff < 1)
        throw std::invalid_argument("recall cutoff must be >= 1");

    std::map<std::string, const RankedList*> run_for;
    for (const auto& run : runs) {
        if (!qrels.judgments().count(run.query_id)) {
            std::cerr << "warning: query " << run.query_id << " has no judgments; skipped\n";
            continue;
        }
        run_for[run.query_id] = &run;
    }

    EvalReport report;
    report.recall_cutoff = recall_cutoff;
    for (const auto& [qid, docs] : qrels.judgments()) {
        const std::size_t relevant_total = qrels.relevant_count(qid);
        if (relevant_total == 0)
            continue;
        RankedList empty_run{qid, {}};
        auto it = run_for.find(qid);
        const RankedList* run = it != run_for.end() ? it->second : &empty_run;
        report.per_topic[qid] = score_topic(*run, qrels, relevant_total, recall_cutoff);
    }

    report.evaluated_topics = report.per_topic.size();
    for (const auto& [qid, m] : report.per_topic) {
        report.mean_average_precision += m.average_precision;
        report.mean_recall += m.recall;
    }
    if (report.evaluated_topics > 0) {
        report.mean_average_precision /= static_cast<double>(report.evaluated_topics);
        report.mean_recall /= static_cast<double>(report.evaluated_topics);
    }
    return report;
}

Aggregate microaverage(std::span<const EvalReport> reports) {
    if (reports.empty())
        throw std::invalid_argument("no reports to aggregate");
    Aggregate agg;
    for (const auto& r : reports) {
        agg.mean_average_precision +=
            r.mean_average_precision * static_cast<double>(r.evaluated_topics);
        agg.mean_recall += r.mean_recall * static_cast<double>(r.evaluated_topics);
        agg.evaluated_topics += r.evaluated_topics;
    }
    if (agg.evaluated_topics > 0) {
        agg.mean_average_precision /= static_cast<double>(agg.evaluated_topics);
        agg.mean_recall /= static_cast<double>(agg.evaluated_topics);
    }
    return agg;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json topics = nlohmann::json::object();
    for (const auto& [qid, m] : per_topic)
        topics[qid] = {{"average_precision", m.average_precision},
                       {"recall_at_" + std::to_string(recall_cutoff), m.recall}};
    return {{"map", mean_average_precision},
            {"r_at_" + std::to_string(recall_cutoff), mean_recall},
            {"evaluated_topics", evaluated_topics},
            {"per_topic", topics}};
}

std::string EvalReport::to_table() const {
    std::ostringstream out;
    char buf[64];
    const std::string recall_header = "R@" + std::to_string(recall_cutoff);
    std::size_t width = 5;
    for (const auto& [qid, m] : per_topic)
        width = std::max(width, qid.size());
    out << std::string(width - 5, ' ') << "topic      AP  " << recall_header << '\n';
    for (const auto& [qid, m] : per_topic) {
        std::snprintf(buf, sizeof buf, "%*s  %6.4f  %6.4f\n", static_cast<int>(width),
                      qid.c_str(), m.average_precision, m.recall);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%*s  %6.4f  %6.4f\n", static_cast<int>(width), "all",
                  mean_average_precision, mean_recall);
    out << buf;
    return out.str();
}

} // namespace psq
