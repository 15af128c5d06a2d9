// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "psq/alignment.hpp"
#include "psq/evaluation.hpp"
#include "psq/indexer.hpp"
#include "psq/pruning.hpp"
#include "psq/search.hpp"
#include "psq/sweep.hpp"

namespace {

using namespace psq;

namespace fs = std::filesystem;

// Normalization flags shared by every text-consuming command. The same
// settings must be used for alignment, indexing, and querying; mismatched
// preprocessing silently breaks table/index token matching.
struct TokenizerFlags {
    bool keep_case = false;
    bool keep_diacritics = false;
    bool keep_punctuation = false;
    std::string doc_stopwords;
    std::string query_stopwords;
    std::string doc_lang = "doc";
    std::string query_lang = "en";

    void add_to(CLI::App* cmd) {
        cmd->add_flag("--keep-case", keep_case, "Skip lowercasing");
        cmd->add_flag("--keep-diacritics", keep_diacritics, "Skip diacritic stripping");
        cmd->add_flag("--keep-punctuation", keep_punctuation, "Skip punctuation stripping");
        cmd->add_option("--doc-stopwords", doc_stopwords,
                        "Document-language stopword file (one token per line)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--query-stopwords", query_stopwords,
                        "Query-language stopword file (one token per line)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--doc-lang", doc_lang, "Document language tag (metadata only)");
        cmd->add_option("--query-lang", query_lang, "Query language tag (metadata only)");
    }

    TokenizerConfig config(const std::string& tag, const std::string& stopword_path) const {
        TokenizerConfig cfg;
        cfg.lowercase = !keep_case;
        cfg.strip_diacritics = !keep_diacritics;
        cfg.strip_punctuation = !keep_punctuation;
        cfg.language_tag = tag;
        if (!stopword_path.empty())
            cfg.stopwords = load_stopwords(stopword_path);
        return cfg;
    }

    TokenizerConfig doc_config() const { return config(doc_lang, doc_stopwords); }
    TokenizerConfig query_config() const { return config(query_lang, query_stopwords); }

    nlohmann::json to_json() const {
        return {{"keep_case", keep_case},
                {"keep_diacritics", keep_diacritics},
                {"keep_punctuation", keep_punctuation},
                {"doc_stopwords", doc_stopwords},
                {"query_stopwords", query_stopwords},
                {"doc_lang", doc_lang},
                {"query_lang", query_lang}};
    }
};

UnigramLM build_lm_from_file(const std::string& path, const TokenizerConfig& cfg, double floor) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open LM corpus: " + path);
    UnigramLMBuilder builder;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        builder.add(tokenize(line, cfg));
    }
    return builder.build(floor);
}

TranslationTable load_table_with_floor(const std::string& path, double pmf_floor) {
    TranslationTable table = load_table(path);
    if (pmf_floor > 0.0)
        table = prune(table, PruningConfig{pmf_floor, 1.0, kNoTopK, false});
    return table;
}

std::string resolve_index_path(const std::string& path) {
    if (fs::is_directory(path))
        return (fs::path(path) / "index.psq").string();
    return path;
}

// --- align ------------------------------------------------------------

struct AlignArgs {
    std::string source, target, tsv, out;
    int iterations = 5;
    TokenizerFlags tok;
};

void cmd_align(const AlignArgs& args) {
    if (args.tsv.empty() == (args.source.empty() || args.target.empty()))
        throw std::runtime_error("provide either --source and --target, or --tsv");

    const ParallelCorpus corpus =
        args.tsv.empty()
            ? load_parallel_corpus(args.source, args.target, args.tok.doc_config(),
                                   args.tok.query_config())
            : load_parallel_tsv(args.tsv, args.tok.doc_config(), args.tok.query_config());

    std::vector<double> loglik;
    const TranslationTable table = train_model1(corpus, args.iterations, &loglik);
    save_table(table, args.out);

    std::cout << "pairs: " << corpus.pairs.size() << "\n"
              << "source vocabulary: " << table.source_count() << "\n"
              << "table entries: " << table.entry_count() << "\n"
              << "log-likelihood: " << loglik.front() << " -> " << loglik.back() << "\n"
              << "wrote " << args.out << "\n";
}

// --- prune ------------------------------------------------------------

struct PruneArgs {
    std::string in, out;
    double pmf_min = 0.0;
    double cdf_max = 1.0;
    std::string top_k = "inf";
    bool renormalize = false;
};

void cmd_prune(const PruneArgs& args) {
    PruningConfig cfg{args.pmf_min, args.cdf_max, parse_top_k(args.top_k), args.renormalize};
    cfg.validate();
    const TranslationTable before = load_table(args.in);
    const TranslationTable after = prune(before, cfg);
    save_table(after, args.out);
    std::cout << prune_stats(before, after).to_json().dump(2) << "\n";
}

// --- index ------------------------------------------------------------

struct IndexArgs {
    std::string docs, table, lm_corpus, out;
    double alpha = 0.5;
    double pmf_floor = 1e-6;
    double lm_floor = 1e-7;
    std::size_t chunk_size = 1024;
    std::string timestamp;
    TokenizerFlags tok;
};

IndexMetadata make_provenance(const TokenizerFlags& tok, const PruningConfig& pruning,
                              const std::string& timestamp) {
    IndexMetadata meta;
    meta.pruning = pruning;
    meta.doc_tokenizer = tok.doc_config();
    meta.query_tokenizer = tok.query_config();
    meta.built_at = timestamp.empty() ? cli::utc_timestamp() : timestamp;
    return meta;
}

void cmd_index(const IndexArgs& args) {
    const auto documents = load_documents_jsonl(args.docs, args.tok.doc_config());
    const auto table = load_table_with_floor(args.table, args.pmf_floor);
    const auto lm = build_lm_from_file(args.lm_corpus, args.tok.query_config(), args.lm_floor);

    const PruningConfig applied{args.pmf_floor, 1.0, kNoTopK, false};
    const auto index = build_index(documents, table, lm, SmoothingConfig{args.alpha},
                                   args.chunk_size,
                                   make_provenance(args.tok, applied, args.timestamp));

    fs::create_directories(args.out);
    index.save((fs::path(args.out) / "index.psq").string());

    nlohmann::json params = {{"alpha", args.alpha},
                             {"pmf_floor", args.pmf_floor},
                             {"lm_floor", args.lm_floor},
                             {"chunk_size", args.chunk_size},
                             {"tokenizer", args.tok.to_json()}};
    cli::write_manifest(args.out, "index", params,
                        {{"docs", args.docs}, {"table", args.table},
                         {"lm_corpus", args.lm_corpus}});

    const IndexSize size = index_size(index);
    std::cout << nlohmann::json{{"documents", index.doc_ids().size()},
                                {"query_vocabulary", index.query_vocab().size()},
                                {"total_postings", size.total_postings},
                                {"index_bytes", size.bytes}}
                     .dump(2)
              << "\n";
}

// --- search -----------------------------------------------------------

struct SearchArgs {
    std::string index, queries, out;
    std::string run_tag = "psq";
    std::size_t depth = 1000;
};

void cmd_search(const SearchArgs& args) {
    const InvertedIndex index = InvertedIndex::load(resolve_index_path(args.index));
    // queries are normalized exactly as the index build's query side was
    const auto queries = load_queries(args.queries, index.metadata().query_tokenizer);

    std::vector<Query> runnable;
    for (const auto& q : queries) {
        if (q.tokens.empty()) {
            std::cerr << "warning: query " << q.query_id
                      << " is empty after preprocessing; skipped\n";
            continue;
        }
        runnable.push_back(q);
    }
    const auto runs = batch_search(index, runnable, args.depth);
    for (const auto& run : runs)
        if (run.items.empty())
            std::cerr << "warning: query " << run.query_id << " matched no documents\n";
    save_run(args.out, runs, args.run_tag);
    std::cout << "wrote " << args.out << " (" << runs.size() << " queries)\n";
}

// --- eval -------------------------------------------------------------

struct EvalArgs {
    std::string run, qrels;
    std::size_t recall_cutoff = 100;
    std::string format = "json";
};

void cmd_eval(const EvalArgs& args) {
    const auto runs = load_run(args.run);
    const auto qrels = load_qrels(args.qrels);
    const EvalReport report = evaluate(runs, qrels, args.recall_cutoff);
    if (args.format == "json" || args.format == "both")
        std::cout << report.to_json().dump(2) << "\n";
    if (args.format == "text" || args.format == "both")
        std::cout << report.to_table();
}

// --- sweep ------------------------------------------------------------

struct SweepArgs {
    std::string docs, table, lm_corpus, queries, qrels, out;
    std::string grid_path;
    bool default_grid = false;
    std::string metric = "r_at_100";
    std::string size_axis = "bytes";
    double pmf_floor = 1e-6;
    double lm_floor = 1e-7;
    std::size_t chunk_size = 1024;
    std::size_t depth = 1000;
    std::size_t recall_cutoff = 100;
    std::size_t workers = 0;
    std::string timestamp;
    TokenizerFlags tok;
};

void cmd_sweep(const SweepArgs& args) {
    if (args.default_grid == !args.grid_path.empty())
        throw std::runtime_error("provide exactly one of --grid or --default-grid");
    const SweepGrid grid =
        args.default_grid ? SweepGrid::default_grid() : load_grid(args.grid_path);

    const SweepMetric metric =
        args.metric == "map" ? SweepMetric::map : SweepMetric::r_at_100;
    const SizeAxis size_axis =
        args.size_axis == "postings" ? SizeAxis::postings : SizeAxis::bytes;

    const auto documents = load_documents_jsonl(args.docs, args.tok.doc_config());
    const auto table = load_table_with_floor(args.table, args.pmf_floor);
    const auto lm = build_lm_from_file(args.lm_corpus, args.tok.query_config(), args.lm_floor);
    const auto queries = load_queries(args.queries, args.tok.query_config());
    const auto qrels = load_qrels(args.qrels);

    SweepInputs inputs;
    inputs.docs = documents;
    inputs.table = &table;
    inputs.lm = &lm;
    inputs.queries = queries;
    inputs.qrels = &qrels;
    inputs.provenance = make_provenance(args.tok, PruningConfig{}, args.timestamp);
    inputs.chunk_size = args.chunk_size;
    inputs.depth = args.depth;
    inputs.recall_cutoff = args.recall_cutoff;
    inputs.workers = args.workers;

    const auto points = run_sweep(inputs, grid);
    const auto pareto = pareto_frontier(points, metric, size_axis);
    emit_analysis(points, pareto, args.out, metric, size_axis);

    nlohmann::json params = {{"grid", grid.to_json()},
                             {"metric", args.metric},
                             {"size_axis", args.size_axis},
                             {"pmf_floor", args.pmf_floor},
                             {"lm_floor", args.lm_floor},
                             {"chunk_size", args.chunk_size},
                             {"depth", args.depth},
                             {"recall_cutoff", args.recall_cutoff},
                             {"tokenizer", args.tok.to_json()}};
    std::map<std::string, std::string> input_files = {{"docs", args.docs},
                                                      {"table", args.table},
                                                      {"lm_corpus", args.lm_corpus},
                                                      {"queries", args.queries},
                                                      {"qrels", args.qrels}};
    if (!args.grid_path.empty())
        input_files["grid"] = args.grid_path;
    cli::write_manifest(args.out, "sweep", params, input_files);

    std::cout << nlohmann::json{{"points", points.size()},
                                {"frontier", pareto.frontier.size()},
                                {"out_dir", args.out}}
                     .dump(2)
              << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indexing-time probabilistic structured queries for CLIR"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    AlignArgs align_args;
    auto* align = app.add_subcommand(
        "align", "Train an IBM Model 1 translation table from parallel text");
    align->add_option("--source", align_args.source, "Source-language (document) lines")
        ->check(CLI::ExistingFile);
    align->add_option("--target", align_args.target, "Target-language (query) lines")
        ->check(CLI::ExistingFile);
    align->add_option("--tsv", align_args.tsv, "Single TSV source<TAB>target file")
        ->check(CLI::ExistingFile);
    align->add_option("--iterations", align_args.iterations, "EM iterations")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    align->add_option("--out", align_args.out, "Output table TSV")->required();
    align_args.tok.add_to(align);
    align->callback([&] { cmd_align(align_args); });

    PruneArgs prune_args;
    auto* prune_cmd = app.add_subcommand("prune", "Prune a translation table");
    prune_cmd->add_option("--in", prune_args.in, "Input table TSV")
        ->required()
        ->check(CLI::ExistingFile);
    prune_cmd->add_option("--out", prune_args.out, "Output table TSV")->required();
    prune_cmd->add_option("--pmf-min", prune_args.pmf_min, "Minimum translation probability")
        ->capture_default_str();
    prune_cmd->add_option("--cdf-max", prune_args.cdf_max, "Cumulative probability cutoff")
        ->capture_default_str();
    prune_cmd->add_option("--top-k", prune_args.top_k, "Max translations per source, or 'inf'")
        ->capture_default_str();
    prune_cmd->add_flag("--renormalize", prune_args.renormalize,
                        "Rescale kept probabilities to sum to 1");
    prune_cmd->callback([&] { cmd_prune(prune_args); });

    IndexArgs index_args;
    auto* index_cmd =
        app.add_subcommand("index", "Build a query-language inverted index from documents");
    index_cmd->add_option("--docs", index_args.docs, "JSON-lines documents (id, text)")
        ->required()
        ->check(CLI::ExistingFile);
    index_cmd->add_option("--table", index_args.table, "Translation table TSV")
        ->required()
        ->check(CLI::ExistingFile);
    index_cmd->add_option("--lm-corpus", index_args.lm_corpus, "Query-language LM text")
        ->required()
        ->check(CLI::ExistingFile);
    index_cmd->add_option("--out", index_args.out, "Output directory")->required();
    index_cmd->add_option("--alpha", index_args.alpha, "Smoothing weight in (0,1)")
        ->capture_default_str();
    index_cmd->add_option("--pmf-floor", index_args.pmf_floor,
                          "Initial PMF floor applied to the table at load (0 disables)")
        ->capture_default_str();
    index_cmd->add_option("--lm-floor", index_args.lm_floor, "Unseen-token LM probability")
        ->capture_default_str();
    index_cmd->add_option("--chunk-size", index_args.chunk_size, "Documents per merge chunk")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
        ->capture_default_str();
    index_cmd->add_option("--timestamp", index_args.timestamp,
                          "Override the build timestamp recorded in the index");
    index_args.tok.add_to(index_cmd);
    index_cmd->callback([&] { cmd_index(index_args); });

    SearchArgs search_args;
    auto* search_cmd = app.add_subcommand("search", "Run ranked retrieval over an index");
    search_cmd->add_option("--index", search_args.index, "Index directory or file")
        ->required()
        ->check(CLI::ExistingPath);
    search_cmd->add_option("--queries", search_args.queries, "TSV query_id<TAB>text")
        ->required()
        ->check(CLI::ExistingFile);
    search_cmd->add_option("--out", search_args.out, "TREC run output path")->required();
    search_cmd->add_option("--depth", search_args.depth, "Results per query")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
        ->capture_default_str();
    search_cmd->add_option("--run-tag", search_args.run_tag, "Run tag column")
        ->capture_default_str();
    search_cmd->callback([&] { cmd_search(search_args); });

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Score a TREC run against qrels");
    eval_cmd->add_option("--run", eval_args.run, "TREC run file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--qrels", eval_args.qrels, "TREC qrels file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--recall-cutoff", eval_args.recall_cutoff, "Recall cutoff rank")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30))
        ->capture_default_str();
    eval_cmd->add_option("--format", eval_args.format, "json, text, or both")
        ->check(CLI::IsMember({"json", "text", "both"}))
        ->capture_default_str();
    eval_cmd->callback([&] { cmd_eval(eval_args); });

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Build and evaluate an index per pruning-grid cell, with Pareto analysis");
    sweep_cmd->add_option("--docs", sweep_args.docs, "JSON-lines documents")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--table", sweep_args.table, "Translation table TSV")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--lm-corpus", sweep_args.lm_corpus, "Query-language LM text")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--queries", sweep_args.queries, "TSV queries")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--qrels", sweep_args.qrels, "TREC qrels")
        ->required()
        ->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", sweep_args.out, "Output directory")->required();
    sweep_cmd->add_option("--grid", sweep_args.grid_path, "Grid JSON file")
        ->check(CLI::ExistingFile);
    sweep_cmd->add_flag("--default-grid", sweep_args.default_grid,
                        "Use the 6x10x8 default grid (480 cells)");
    sweep_cmd->add_option("--metric", sweep_args.metric, "Frontier metric")
        ->check(CLI::IsMember({"r_at_100", "map"}))
        ->capture_default_str();
    sweep_cmd->add_option("--size-axis", sweep_args.size_axis, "Frontier size axis")
        ->check(CLI::IsMember({"bytes", "postings"}))
        ->capture_default_str();
    sweep_cmd->add_option("--pmf-floor", sweep_args.pmf_floor,
                          "Initial PMF floor applied to the table at load (0 disables)")
        ->capture_default_str();
    sweep_cmd->add_option("--lm-floor", sweep_args.lm_floor, "Unseen-token LM probability")
        ->capture_default_str();
    sweep_cmd->add_option("--chunk-size", sweep_args.chunk_size, "Documents per merge chunk")
        ->capture_default_str();
    sweep_cmd->add_option("--depth", sweep_args.depth, "Results per query")
        ->capture_default_str();
    sweep_cmd->add_option("--recall-cutoff", sweep_args.recall_cutoff, "Recall cutoff rank")
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sweep_args.workers,
                          "Parallel grid cells (0 = hardware concurrency)")
        ->capture_default_str();
    sweep_cmd->add_option("--timestamp", sweep_args.timestamp,
                          "Override the build timestamp recorded in indexes");
    sweep_args.tok.add_to(sweep_cmd);
    sweep_cmd->callback([&] { cmd_sweep(sweep_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
