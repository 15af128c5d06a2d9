// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string psq_bin() {
    const char* bin = std::getenv("PSQ_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "PSQ_BIN must point at the psq binary");
    return bin;
}

int run(const std::string& args, const std::string& out_file = "/dev/null") {
    const std::string cmd = psq_bin() + " " + args + " >" + out_file + " 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

struct Workdir {
    fs::path prev;
    explicit Workdir(const std::string& name) : prev(fs::current_path()) {
        fs::remove_all(name);
        fs::create_directories(name);
        fs::current_path(name);
    }
    ~Workdir() {
        const fs::path dir = fs::current_path();
        fs::current_path(prev);
        fs::remove_all(dir);
    }
};

void write_fixture() {
    // one-to-one parallel corpus forces an unambiguous table
    write_file("src.txt", "Hund\nKatze\nVogel\nHund Katze\nVogel Hund\n");
    write_file("tgt.txt", "dog\ncat\nbird\ndog cat\nbird dog\n");
    write_file("docs.jsonl", "{\"id\": \"d1\", \"text\": \"Hund Hund\"}\n"
                             "{\"id\": \"d2\", \"text\": \"Katze\"}\n"
                             "{\"id\": \"d3\", \"text\": \"Vogel Vogel\"}\n");
    write_file("en.txt", "dog cat bird\ncat dog bird\n");
    write_file("queries.tsv", "q1\tdog\nq2\tcat\nq3\tbird\n");
    write_file("qrels.txt", "q1 0 d1 1\nq2 0 d2 1\nq3 0 d3 1\n");
}

} // namespace

TEST_CASE("cli: full pipeline yields perfect retrieval on the forced fixture") {
    Workdir wd("cli_test_pipeline");
    write_fixture();

    CHECK(run("align --source src.txt --target tgt.txt --iterations 5 --out table.tsv") == 0);
    CHECK(run("index --docs docs.jsonl --table table.tsv --lm-corpus en.txt --out idx "
              "--timestamp 2026-01-01T00:00:00Z") == 0);
    CHECK(run("search --index idx --queries queries.tsv --out run.txt") == 0);
    CHECK(run("eval --run run.txt --qrels qrels.txt", "eval.json") == 0);

    const auto report = nlohmann::json::parse(read_file("eval.json"));
    CHECK(report.at("map").get<double>() == 1.0);
    CHECK(report.at("r_at_100").get<double>() == 1.0);
    CHECK(report.at("evaluated_topics").get<int>() == 3);

    // each query's relevant document ranks first
    const auto run_text = read_file("run.txt");
    CHECK(run_text.find("q1 Q0 d1 1 ") != std::string::npos);
    CHECK(run_text.find("q2 Q0 d2 1 ") != std::string::npos);
    CHECK(run_text.find("q3 Q0 d3 1 ") != std::string::npos);
}

TEST_CASE("cli: missing inputs and bad flags exit nonzero") {
    Workdir wd("cli_test_errors");
    write_fixture();

    CHECK(run("align --source nope.txt --target tgt.txt --out t.tsv") != 0);
    const auto err = read_file("stderr.txt");
    CHECK(err.find("nope.txt") != std::string::npos);

    CHECK(run("align --source src.txt --target tgt.txt --iterations 0 --out t.tsv") != 0);
    CHECK(run("align --out t.tsv") != 0); // neither --tsv nor --source/--target
}

TEST_CASE("cli: prune identity, top-k, and domain errors") {
    Workdir wd("cli_test_prune");
    write_fixture();
    REQUIRE(run("align --source src.txt --target tgt.txt --out table.tsv") == 0);

    CHECK(run("prune --in table.tsv --out same.tsv") == 0);
    CHECK(read_file("same.tsv") == read_file("table.tsv"));

    CHECK(run("prune --in table.tsv --out topk1.tsv --top-k 1", "stats.json") == 0);
    const auto stats = nlohmann::json::parse(read_file("stats.json"));
    CHECK(stats.at("max_translations_after").get<int>() == 1);
    std::ifstream pruned("topk1.tsv");
    std::string line;
    std::set<std::string> sources;
    while (std::getline(pruned, line))
        CHECK(sources.insert(line.substr(0, line.find('\t'))).second); // one line per source

    CHECK(run("prune --in table.tsv --out bad.tsv --cdf-max 0") != 0);
}

TEST_CASE("cli: out-of-vocabulary query writes no lines but exits zero") {
    Workdir wd("cli_test_oov");
    write_fixture();
    write_file("oov.tsv", "q9\tunicorn\n");
    REQUIRE(run("align --source src.txt --target tgt.txt --out table.tsv") == 0);
    REQUIRE(run("index --docs docs.jsonl --table table.tsv --lm-corpus en.txt --out idx") == 0);

    CHECK(run("search --index idx --queries oov.tsv --out run.txt") == 0);
    CHECK(read_file("run.txt").empty());
    CHECK(read_file("stderr.txt").find("q9") != std::string::npos);
}

TEST_CASE("cli: eval of an empty run scores zero for judged topics") {
    Workdir wd("cli_test_emptyrun");
    write_fixture();
    write_file("empty_run.txt", "");
    CHECK(run("eval --run empty_run.txt --qrels qrels.txt", "eval.json") == 0);
    const auto report = nlohmann::json::parse(read_file("eval.json"));
    CHECK(report.at("map").get<double>() == 0.0);
    CHECK(report.at("r_at_100").get<double>() == 0.0);
    CHECK(report.at("evaluated_topics").get<int>() == 3);
}

TEST_CASE("cli: rebuilding with a pinned timestamp is byte-identical") {
    Workdir wd("cli_test_idempotent");
    write_fixture();
    REQUIRE(run("align --source src.txt --target tgt.txt --out table.tsv") == 0);

    const std::string flags = "index --docs docs.jsonl --table table.tsv --lm-corpus en.txt "
                              "--timestamp 2026-03-04T00:00:00Z --out ";
    REQUIRE(run(flags + "idx1") == 0);
    REQUIRE(run(flags + "idx2") == 0);
    CHECK(read_file("idx1/index.psq") == read_file("idx2/index.psq"));

    const auto m1 = nlohmann::json::parse(read_file("idx1/manifest.json"));
    const auto m2 = nlohmann::json::parse(read_file("idx2/manifest.json"));
    CHECK(m1.at("inputs") == m2.at("inputs"));
    CHECK(m1.at("parameters") == m2.at("parameters"));
    CHECK(m1.at("command") == "index");
    CHECK(m1.at("inputs").at("docs").at("sha256").get<std::string>().size() == 64);
}

TEST_CASE("cli: sweep writes the analysis bundle and manifest") {
    Workdir wd("cli_test_sweep");
    write_fixture();
    write_file("grid.json",
               R"({"pmf": [0, 0.01], "cdf": [1.0], "topk": [1, "inf"], "alpha": 0.5})");
    REQUIRE(run("align --source src.txt --target tgt.txt --out table.tsv") == 0);

    CHECK(run("sweep --docs docs.jsonl --table table.tsv --lm-corpus en.txt "
              "--queries queries.tsv --qrels qrels.txt --grid grid.json --out sw "
              "--timestamp 2026-01-01T00:00:00Z",
              "sweep.json") == 0);
    const auto summary = nlohmann::json::parse(read_file("sweep.json"));
    CHECK(summary.at("points").get<int>() == 4);

    std::size_t rows = 0;
    std::ifstream points("sw/points.csv");
    std::string line;
    while (std::getline(points, line))
        ++rows;
    CHECK(rows == 5); // header + 4 cells
    CHECK(fs::exists("sw/frontier.csv"));
    CHECK(fs::exists("sw/manifest.json"));
    CHECK(fs::exists("sw/heatmap_topk_cdf.r_at_100.tsv"));

    // exactly one of --grid / --default-grid
    CHECK(run("sweep --docs docs.jsonl --table table.tsv --lm-corpus en.txt "
              "--queries queries.tsv --qrels qrels.txt --out sw2") != 0);
}
