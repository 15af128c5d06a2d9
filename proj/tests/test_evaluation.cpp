// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "psq/errors.hpp"
#include "psq/evaluation.hpp"

using namespace psq;

namespace {

Qrels qrels_of(std::initializer_list<std::tuple<const char*, const char*, int>> rows) {
    Qrels q;
    for (const auto& [qid, did, grade] : rows)
        q.add(qid, did, grade);
    return q;
}

RankedList run_of(const char* qid, std::initializer_list<const char*> docs) {
    RankedList run{qid, {}};
    double score = static_cast<double>(docs.size());
    for (const char* d : docs)
        run.items.push_back({d, score--});
    return run;
}

// Independent reference: precision@k recomputed from scratch at every rank.
TopicMetrics brute_force_topic(const RankedList& run, const Qrels& qrels,
                               std::size_t relevant_total, std::size_t cutoff) {
    TopicMetrics m;
    double ap = 0.0;
    for (std::size_t k = 1; k <= run.items.size(); ++k) {
        if (!qrels.is_relevant(run.query_id, run.items[k - 1].doc_id))
            continue;
        std::size_t found = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (qrels.is_relevant(run.query_id, run.items[j].doc_id))
                ++found;
        ap += static_cast<double>(found) / static_cast<double>(k);
    }
    m.average_precision = ap / static_cast<double>(relevant_total);
    std::size_t in_top = 0;
    for (std::size_t j = 0; j < std::min(cutoff, run.items.size()); ++j)
        if (qrels.is_relevant(run.query_id, run.items[j].doc_id))
            ++in_top;
    m.recall = static_cast<double>(in_top) / static_cast<double>(relevant_total);
    return m;
}

} // namespace

TEST_CASE("qrels loading and duplicate detection") {
    const std::string path = "test_qrels.txt";
    {
        std::ofstream out(path, std::ios::binary);
        out << "1 0 d1 1\n1 0 d2 0\n";
    }
    const auto qrels = load_qrels(path);
    CHECK(qrels.is_relevant("1", "d1"));
    CHECK(!qrels.is_relevant("1", "d2"));
    CHECK(qrels.relevant_count("1") == 1);
    std::remove(path.c_str());

    {
        std::ofstream out(path, std::ios::binary);
        out << "1 0 d1 1\n1 0 d1 2\n";
    }
    CHECK_THROWS_AS(load_qrels(path), ParseError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "1 0 d1\n";
    }
    CHECK_THROWS_AS(load_qrels(path), ParseError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "";
    }
    CHECK(evaluate({}, load_qrels(path)).evaluated_topics == 0);
    std::remove(path.c_str());
}

TEST_CASE("perfect retrieval scores one") {
    const auto qrels = qrels_of({{"1", "d1", 1}});
    const std::vector<RankedList> runs = {run_of("1", {"d1"})};
    const auto report = evaluate(runs, qrels);
    CHECK(report.per_topic.at("1").average_precision == 1.0);
    CHECK(report.per_topic.at("1").recall == 1.0);
    CHECK(report.mean_average_precision == 1.0);
}

TEST_CASE("single relevant document at rank two") {
    const auto qrels = qrels_of({{"1", "d9", 1}});
    const std::vector<RankedList> runs = {run_of("1", {"d0", "d9"})};
    const auto report = evaluate(runs, qrels);
    CHECK(report.per_topic.at("1").average_precision == 0.5);
    CHECK(report.per_topic.at("1").recall == 1.0);
}

TEST_CASE("two relevant documents at ranks one and three") {
    const auto qrels = qrels_of({{"1", "a", 1}, {"1", "c", 1}});
    const std::vector<RankedList> runs = {run_of("1", {"a", "b", "c"})};
    const auto report = evaluate(runs, qrels);
    CHECK(report.per_topic.at("1").average_precision ==
          doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("topics without relevant documents are excluded") {
    const auto qrels = qrels_of({{"1", "d1", 1}, {"2", "d1", 0}});
    const std::vector<RankedList> runs = {run_of("1", {"d1"}), run_of("2", {"d1"})};
    const auto report = evaluate(runs, qrels);
    CHECK(report.evaluated_topics == 1);
    CHECK(report.per_topic.count("2") == 0);
}

TEST_CASE("judged topics missing from the run score zero") {
    const auto qrels = qrels_of({{"1", "d1", 1}, {"2", "d2", 1}});
    const auto report = evaluate({}, qrels);
    CHECK(report.evaluated_topics == 2);
    CHECK(report.per_topic.at("1").average_precision == 0.0);
    CHECK(report.per_topic.at("2").recall == 0.0);
    CHECK(report.mean_average_precision == 0.0);
}

TEST_CASE("recall cutoff bounds the counted prefix") {
    const auto qrels = qrels_of({{"1", "d4", 1}});
    const std::vector<RankedList> runs = {run_of("1", {"d0", "d1", "d2", "d3", "d4"})};
    CHECK(evaluate(runs, qrels, 4).per_topic.at("1").recall == 0.0);
    CHECK(evaluate(runs, qrels, 5).per_topic.at("1").recall == 1.0);
    // recall is non-decreasing in the cutoff
    double prev = 0.0;
    for (std::size_t k = 1; k <= 6; ++k) {
        const double r = evaluate(runs, qrels, k).per_topic.at("1").recall;
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("metrics ignore score magnitudes") {
    const auto qrels = qrels_of({{"1", "a", 1}, {"1", "c", 2}});
    RankedList raw{"1", {{"b", 100.0}, {"a", 10.0}, {"c", 1.0}}};
    RankedList squashed{"1", {{"b", 0.3}, {"a", 0.2}, {"c", 0.1}}};
    const auto r1 = evaluate(std::vector<RankedList>{raw}, qrels);
    const auto r2 = evaluate(std::vector<RankedList>{squashed}, qrels);
    CHECK(r1.per_topic.at("1") == r2.per_topic.at("1"));
}

TEST_CASE("evaluate matches the brute-force reference") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        Qrels qrels;
        const int n_docs = 1 + static_cast<int>(rng() % 20);
        std::size_t relevant = 0;
        for (int d = 0; d < n_docs; ++d) {
            const int grade = static_cast<int>(rng() % 3);
            qrels.add("t", "d" + std::to_string(d), grade);
            if (grade > 0)
                ++relevant;
        }
        if (relevant == 0)
            continue;
        // random permutation of a random subset as the run
        std::vector<std::string> pool;
        for (int d = 0; d < n_docs; ++d)
            if (rng() % 4)
                pool.push_back("d" + std::to_string(d));
        std::shuffle(pool.begin(), pool.end(), rng);
        RankedList run{"t", {}};
        double score = 1000.0;
        for (const auto& d : pool)
            run.items.push_back({d, score--});

        const std::size_t cutoff = 1 + rng() % 25;
        const auto report = evaluate(std::vector<RankedList>{run}, qrels, cutoff);
        const auto expected = brute_force_topic(run, qrels, relevant, cutoff);
        CHECK(report.per_topic.at("t").average_precision == expected.average_precision);
        CHECK(report.per_topic.at("t").recall == expected.recall);
    }
}

TEST_CASE("microaverage pools topics across reports") {
    EvalReport a;
    a.mean_average_precision = 0.2;
    a.mean_recall = 0.2;
    a.evaluated_topics = 10;
    EvalReport b;
    b.mean_average_precision = 0.8;
    b.mean_recall = 0.8;
    b.evaluated_topics = 30;

    const auto one = microaverage(std::vector<EvalReport>{a});
    CHECK(one.mean_recall == 0.2);

    const auto pooled = microaverage(std::vector<EvalReport>{a, b});
    CHECK(pooled.mean_recall == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(pooled.evaluated_topics == 40);

    b.evaluated_topics = 10;
    const auto equal = microaverage(std::vector<EvalReport>{a, b});
    CHECK(equal.mean_average_precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(microaverage({}), std::invalid_argument);
}

TEST_CASE("report renders JSON and aligned text") {
    const auto qrels = qrels_of({{"1", "d1", 1}});
    const std::vector<RankedList> runs = {run_of("1", {"d1"})};
    const auto report = evaluate(runs, qrels);
    const auto j = report.to_json();
    CHECK(j.at("map").get<double>() == 1.0);
    CHECK(j.at("r_at_100").get<double>() == 1.0);
    CHECK(j.at("evaluated_topics").get<int>() == 1);
    CHECK(j.at("per_topic").contains("1"));
    const auto table = report.to_table();
    CHECK(table.find("topic") != std::string::npos);
    CHECK(table.find("all") != std::string::npos);
}
