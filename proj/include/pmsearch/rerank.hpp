#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pmsearch/corpus.hpp"
#include "pmsearch/eval.hpp"
#include "pmsearch/features.hpp"
#include "pmsearch/logistic.hpp"
#include "pmsearch/query.hpp"
#include "pmsearch/ranked_list.hpp"

namespace pmsearch {

/// Which disease surfaces count when testing a title for the disease.
enum class TitleMatch {
    all_surfaces,   // original, preferred, synonyms and acronyms
    original_only,  // the topic's own disease text
};

struct RerankConfig {
    double penalty_factor = 0.6;
    std::size_t top_k = 50;
    TitleMatch title_match = TitleMatch::all_surfaces;

    /// Throws Error unless 0 < penalty_factor <= 1 and top_k >= 1.
    void validate() const;
};

/// Disease surfaces of `query` selected by `mode`.
[[nodiscard]] std::vector<std::string> title_surfaces(ExpandedQuery const& query, TitleMatch mode);

/// Multiplies the score of every document whose title mentions none of the
/// surfaces by `factor`, then re-sorts. Throws Error for an id missing from
/// `store`.
[[nodiscard]] RankedList apply_title_penalty(RankedList ranked, CorpusStore const& store,
                                             std::span<std::string const> disease_surfaces, double factor);

/// (s - min) / (max - min); all zeros when every score is equal. Throws on
/// empty input.
[[nodiscard]] std::vector<double> min_max_scale(std::span<double const> scores);

/// Replaces the scores of `ranked` with their min-max scaled values.
[[nodiscard]] RankedList min_max_scale(RankedList ranked);

/// Adds the model's relevance probability to the scores of the first `k`
/// entries and re-sorts them among themselves. Entries after position k are
/// returned untouched.
[[nodiscard]] RankedList rerank_top_k(RankedList ranked, LogisticModel const& model, CorpusStore const& store,
                                      std::span<std::string const> disease_surfaces, KeywordLists const& keywords,
                                      std::size_t k);

/// Title penalty, min-max scaling over the whole list, then top-k fusion.
[[nodiscard]] RankedList rerank_pipeline(RankedList raw, LogisticModel const& model, CorpusStore const& store,
                                         std::span<std::string const> disease_surfaces, KeywordLists const& keywords,
                                         RerankConfig const& config);

struct TrainingSet {
    std::vector<LabeledExample> examples;
    std::size_t skipped_missing = 0;  // judged documents absent from the store
};

/// One example per judged (topic, doc) pair whose doc is in `store`; label 1
/// iff grade >= 1. Features use the disease surfaces of the topic's query.
[[nodiscard]] TrainingSet build_training_set(std::span<ExpandedQuery const> queries, Qrels const& qrels,
                                             CorpusStore const& store, KeywordLists const& keywords,
                                             TitleMatch mode = TitleMatch::all_surfaces);

}  // namespace pmsearch
