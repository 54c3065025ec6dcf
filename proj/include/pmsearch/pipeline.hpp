#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmsearch/config.hpp"
#include "pmsearch/corpus.hpp"
#include "pmsearch/eval.hpp"
#include "pmsearch/expand.hpp"
#include "pmsearch/index.hpp"
#include "pmsearch/logistic.hpp"
#include "pmsearch/query.hpp"
#include "pmsearch/ranked_list.hpp"

namespace pmsearch {

struct KnowledgeBases {
    DiseaseKb diseases;
    GeneTable genes;
};

/// Loads whichever KB files are configured; unset paths give empty tables.
[[nodiscard]] KnowledgeBases load_knowledge_bases(PipelinePaths const& paths);

[[nodiscard]] ExpansionMode expansion_mode(Strategy strategy);

/// Expands one topic for `strategy`, mining acronyms from `store` when the
/// strategy uses them.
[[nodiscard]] ExpandedQuery build_query(Topic const& topic, CorpusStore const& store, KnowledgeBases const& kbs,
                                        ExpansionWeights const& weights, Strategy strategy);

/// Retrieves and, depending on the strategy, reranks every topic. `model` is
/// required for Strategy::full.
[[nodiscard]] std::vector<RankedList> run_strategy(FieldedIndex const& index, std::span<Topic const> topics,
                                                   KnowledgeBases const& kbs, PipelineConfig const& config,
                                                   LogisticModel const* model);

struct IndexSummary {
    std::size_t kept = 0;
    std::size_t discarded = 0;
    std::size_t rejected = 0;
};

struct TrainSummary {
    std::size_t examples = 0;
    std::size_t positives = 0;
    std::size_t skipped_missing = 0;
    double train_recall = 0.0;  // mean R@depth of the expand+acronym retrieval
    LogisticModel model;
};

/// Each command throws pmsearch::Error naming the missing artifact or the
/// failing input.
IndexSummary cmd_index(PipelineConfig const& config);
std::filesystem::path cmd_run(PipelineConfig const& config);
TrainSummary cmd_train(PipelineConfig const& config);
/// Evaluates `run_file` and writes the JSON report to `<run_file>.metrics.json`.
MetricsReport cmd_eval(PipelineConfig const& config, std::filesystem::path const& run_file);

[[nodiscard]] std::filesystem::path metrics_path(std::filesystem::path const& run_file);

}  // namespace pmsearch
