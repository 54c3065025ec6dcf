#include "pmsearch/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"
#include "pmsearch/rerank.hpp"

namespace pmsearch {

namespace {

std::filesystem::path const& require(std::filesystem::path const& path, char const* what)
{
    if (path.empty()) {
        throw Error(std::string("no ") + what + " configured");
    }
    if (!std::filesystem::exists(path)) {
        throw Error(std::string(what) + " not found: " + path.string());
    }
    return path;
}

std::vector<Topic> load_topics(std::filesystem::path const& path) { return parse_topics(read_file(path)); }

Qrels load_qrels(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return parse_qrels(in);
}

FieldedIndex load_index(PipelineConfig const& config)
{
    auto const& dir = require(config.paths.index_dir, "index directory");
    return FieldedIndex::load(dir);
}

}  // namespace

KnowledgeBases load_knowledge_bases(PipelinePaths const& paths)
{
    KnowledgeBases kbs;
    if (!paths.disease_kb.empty()) {
        std::istringstream in(read_file(require(paths.disease_kb, "disease KB")));
        kbs.diseases = load_disease_kb(in);
    }
    if (!paths.gene_table.empty()) {
        std::istringstream in(read_file(require(paths.gene_table, "gene table")));
        kbs.genes = load_gene_aliases(in);
    }
    return kbs;
}

ExpansionMode expansion_mode(Strategy strategy)
{
    switch (strategy) {
    case Strategy::baseline: return ExpansionMode::original_only();
    case Strategy::expand: return {true, false};
    default: return {true, true};
    }
}

ExpandedQuery build_query(Topic const& topic, CorpusStore const& store, KnowledgeBases const& kbs,
                          ExpansionWeights const& weights, Strategy strategy)
{
    auto const mode = expansion_mode(strategy);
    std::vector<AcronymCount> mined;
    if (mode.acronyms) {
        mined = mine_acronyms(store, topic.disease);
    }
    return expand_topic(topic, kbs.diseases, kbs.genes, mined, weights, mode);
}

std::vector<RankedList> run_strategy(FieldedIndex const& index, std::span<Topic const> topics,
                                     KnowledgeBases const& kbs, PipelineConfig const& config,
                                     LogisticModel const* model)
{
    if (config.strategy == Strategy::full && model == nullptr) {
        throw Error("strategy 'full' needs a trained model");
    }
    std::vector<RankedList> lists;
    lists.reserve(topics.size());
    for (auto const& topic : topics) {
        auto const query = build_query(topic, index.store(), kbs, config.weights, config.strategy);
        auto ranked = index.search(query, config.depth);
        auto const surfaces = title_surfaces(query, config.rerank.title_match);
        if (config.strategy == Strategy::heuristic && !ranked.entries.empty()) {
            ranked = apply_title_penalty(std::move(ranked), index.store(), surfaces, config.rerank.penalty_factor);
        } else if (config.strategy == Strategy::full && !ranked.entries.empty()) {
            ranked = rerank_pipeline(std::move(ranked), *model, index.store(), surfaces, model->keywords, config.rerank);
        }
        lists.push_back(std::move(ranked));
    }
    return lists;
}

IndexSummary cmd_index(PipelineConfig const& config)
{
    std::ifstream in(require(config.paths.corpus, "corpus file"));
    if (!in) {
        throw Error("cannot open " + config.paths.corpus.string());
    }
    auto const store = read_documents(in);
    if (config.paths.index_dir.empty()) {
        throw Error("no index directory configured");
    }
    auto const index = FieldedIndex::build(store, config.bm25, config.remove_stopwords);
    index.save(config.paths.index_dir);
    return {store.kept(), store.discarded(), store.errors().size()};
}

std::filesystem::path cmd_run(PipelineConfig const& config)
{
    auto const index = load_index(config);
    auto const topics = load_topics(require(config.paths.topics, "topic file"));
    auto const kbs = load_knowledge_bases(config.paths);
    std::optional<LogisticModel> model;
    if (config.strategy == Strategy::full) {
        model = LogisticModel::from_json(read_file(require(config.paths.model, "model file")));
    }
    if (config.paths.run.empty()) {
        throw Error("no run file configured");
    }
    auto const lists = run_strategy(index, topics, kbs, config, model ? &*model : nullptr);
    auto const entries = to_run_entries(lists, config.run_tag);
    std::ostringstream out;
    write_run(out, entries);
    write_file_atomic(config.paths.run, out.str());
    return config.paths.run;
}

TrainSummary cmd_train(PipelineConfig const& config)
{
    auto const index = load_index(config);
    auto const& topics_path = config.paths.train_topics.empty() ? config.paths.topics : config.paths.train_topics;
    auto const& qrels_path = config.paths.train_qrels.empty() ? config.paths.qrels : config.paths.train_qrels;
    auto const topics = load_topics(require(topics_path, "training topic file"));
    auto const qrels = load_qrels(require(qrels_path, "training qrels"));
    if (qrels.empty()) {
        throw Error("training qrels are empty");
    }
    if (config.paths.model.empty()) {
        throw Error("no model file configured");
    }
    auto const kbs = load_knowledge_bases(config.paths);
    auto const keywords = config.paths.keywords.empty()
                              ? KeywordLists::defaults()
                              : KeywordLists::from_json(read_file(require(config.paths.keywords, "keyword file")));

    TrainSummary summary;
    std::vector<ExpandedQuery> queries;
    double recall_sum = 0.0;
    for (auto const& topic : topics) {
        queries.push_back(build_query(topic, index.store(), kbs, config.weights, Strategy::expand_acronym));
        auto const ranked = index.search(queries.back(), config.depth);
        recall_sum += recall_at_k(ranked, qrels, topic.number, config.depth);
    }
    if (!topics.empty()) {
        summary.train_recall = recall_sum / static_cast<double>(topics.size());
    }

    auto const set = build_training_set(queries, qrels, index.store(), keywords, config.rerank.title_match);
    summary.examples = set.examples.size();
    summary.skipped_missing = set.skipped_missing;
    for (auto const& ex : set.examples) {
        summary.positives += static_cast<std::size_t>(ex.label);
    }
    auto result = train_logistic(set.examples, config.train);
    result.model.keywords = keywords;
    write_file_atomic(config.paths.model, result.model.to_json());
    summary.model = std::move(result.model);
    return summary;
}

std::filesystem::path metrics_path(std::filesystem::path const& run_file)
{
    auto p = run_file;
    p += ".metrics.json";
    return p;
}

MetricsReport cmd_eval(PipelineConfig const& config, std::filesystem::path const& run_file)
{
    auto const qrels = load_qrels(require(config.paths.qrels, "qrels file"));
    std::ifstream in(require(run_file, "run file"));
    auto const run = read_run(in);
    auto report = evaluate_run(run, qrels);
    write_file_atomic(metrics_path(run_file), report.to_json());
    return report;
}

}  // namespace pmsearch
