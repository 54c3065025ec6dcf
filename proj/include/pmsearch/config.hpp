#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "pmsearch/expand.hpp"
#include "pmsearch/index.hpp"
#include "pmsearch/logistic.hpp"
#include "pmsearch/rerank.hpp"

namespace pmsearch {

/// Retrieval ladder, each step adding one component to the previous one.
enum class Strategy {
    baseline,        // original disease and gene terms
    expand,          // + preferred terms, synonyms, gene aliases
    expand_acronym,  // + disease acronyms
    heuristic,       // + title penalty
    full,            // + logistic rerank of the top k
};

[[nodiscard]] std::string_view to_string(Strategy strategy);
/// Accepts baseline, expand, expand+acronym, heuristic and full.
[[nodiscard]] Strategy parse_strategy(std::string_view name);

struct PipelinePaths {
    std::filesystem::path corpus;
    std::filesystem::path topics;
    std::filesystem::path disease_kb;
    std::filesystem::path gene_table;
    std::filesystem::path qrels;
    std::filesystem::path train_topics;  // falls back to `topics`
    std::filesystem::path train_qrels;   // falls back to `qrels`
    std::filesystem::path index_dir;
    std::filesystem::path model;
    std::filesystem::path keywords;
    std::filesystem::path run;
};

struct PipelineConfig {
    PipelinePaths paths;
    Bm25Params bm25;
    bool remove_stopwords = true;
    ExpansionWeights weights;
    RerankConfig rerank;
    TrainOptions train;
    std::uint64_t seed = 0;  // the Newton trainer draws no random numbers
    std::size_t depth = kRetrievalDepth;
    Strategy strategy = Strategy::full;
    std::string run_tag = "pmsearch";

    /// Throws Error if a numeric field is out of range.
    void validate() const;
};

/// Reads an INI file with sections [paths], [bm25], [expansion], [rerank],
/// [train] and [run]. Relative paths resolve against the file's directory.
[[nodiscard]] PipelineConfig load_config(std::filesystem::path const& file);
[[nodiscard]] PipelineConfig parse_config(std::string const& text, std::filesystem::path const& base_dir);

}  // namespace pmsearch
