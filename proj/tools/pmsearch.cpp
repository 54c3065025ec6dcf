#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmsearch/config.hpp"
#include "pmsearch/error.hpp"
#include "pmsearch/pipeline.hpp"

namespace {

struct Overrides {
    std::string strategy;
    std::optional<std::size_t> depth;
    std::string run;
    std::string model;
    std::string index_dir;
    std::string topics;
    std::string qrels;
};

pmsearch::PipelineConfig resolve_config(std::string const& path, Overrides const& o)
{
    auto config = pmsearch::load_config(path);
    if (!o.strategy.empty()) {
        config.strategy = pmsearch::parse_strategy(o.strategy);
    }
    if (o.depth) {
        config.depth = *o.depth;
    }
    if (!o.run.empty()) {
        config.paths.run = o.run;
    }
    if (!o.model.empty()) {
        config.paths.model = o.model;
    }
    if (!o.index_dir.empty()) {
        config.paths.index_dir = o.index_dir;
    }
    if (!o.topics.empty()) {
        config.paths.topics = o.topics;
    }
    if (!o.qrels.empty()) {
        config.paths.qrels = o.qrels;
    }
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fielded BM25 search with query expansion and learned reranking"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;
    app.add_option("-c,--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);

    auto* index_cmd = app.add_subcommand("index", "Build the index from the corpus file");
    index_cmd->add_option("--index-dir", overrides.index_dir, "Index directory");

    auto* run_cmd = app.add_subcommand("run", "Retrieve every topic and write a TREC run file");
    run_cmd->add_option("-s,--strategy", overrides.strategy, "baseline, expand, expand+acronym, heuristic or full");
    run_cmd->add_option("-d,--depth", overrides.depth, "Documents retrieved per topic")->check(CLI::PositiveNumber);
    run_cmd->add_option("-o,--run", overrides.run, "Output run file");
    run_cmd->add_option("--model", overrides.model, "Model file for the full strategy");
    run_cmd->add_option("--topics", overrides.topics, "Topic file");
    run_cmd->add_option("--index-dir", overrides.index_dir, "Index directory");

    auto* train_cmd = app.add_subcommand("train", "Train the reranker on judged training topics");
    train_cmd->add_option("--model", overrides.model, "Output model file");
    train_cmd->add_option("--index-dir", overrides.index_dir, "Index directory");

    std::string run_file;
    auto* eval_cmd = app.add_subcommand("eval", "Score a run file against qrels");
    eval_cmd->add_option("-r,--run", run_file, "Run file (defaults to paths.run)");
    eval_cmd->add_option("--qrels", overrides.qrels, "Qrels file");

    CLI11_PARSE(app, argc, argv);

    try {
        auto const config = resolve_config(config_path, overrides);
        if (*index_cmd) {
            auto const s = pmsearch::cmd_index(config);
            std::printf("indexed %zu documents (%zu duplicates discarded, %zu rejected) into %s\n", s.kept, s.discarded,
                        s.rejected, config.paths.index_dir.string().c_str());
        } else if (*run_cmd) {
            auto const path = pmsearch::cmd_run(config);
            std::printf("strategy %s: wrote %s\n", std::string(pmsearch::to_string(config.strategy)).c_str(),
                        path.string().c_str());
        } else if (*train_cmd) {
            auto const s = pmsearch::cmd_train(config);
            std::printf("trained on %zu examples (%zu relevant, %zu judged documents missing from the index)\n",
                        s.examples, s.positives, s.skipped_missing);
            std::printf("training-topic recall at depth %zu: %.4f\n", config.depth, s.train_recall);
            std::printf("iterations %zu, final loss %.6f%s\n", s.model.iterations, s.model.final_loss,
                        s.model.converged ? "" : " (not converged)");
            std::printf("wrote %s\n", config.paths.model.string().c_str());
        } else if (*eval_cmd) {
            std::filesystem::path path = run_file.empty() ? config.paths.run : std::filesystem::path(run_file);
            if (path.empty()) {
                throw pmsearch::Error("no run file given");
            }
            auto const report = pmsearch::cmd_eval(config, path);
            std::cout << report.to_text();
            std::printf("wrote %s\n", pmsearch::metrics_path(path).string().c_str());
        }
    } catch (std::exception const& e) {
        std::fprintf(stderr, "pmsearch: %s\n", e.what());
        return 1;
    }
    return 0;
}
