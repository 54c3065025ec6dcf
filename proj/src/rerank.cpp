#include "pmsearch/rerank.hpp"

#include <algorithm>

#include "pmsearch/error.hpp"

namespace pmsearch {

namespace {

DocumentRecord const& lookup(CorpusStore const& store, std::string const& doc_id)
{
    auto const* doc = store.find(doc_id);
    if (doc == nullptr) {
        throw Error("document " + doc_id + " is not in the store");
    }
    return *doc;
}

}  // namespace

void RerankConfig::validate() const
{
    if (!(penalty_factor > 0.0 && penalty_factor <= 1.0)) {
        throw Error("penalty factor must lie in (0, 1]");
    }
    if (top_k == 0) {
        throw Error("rerank depth must be positive");
    }
}

std::vector<std::string> title_surfaces(ExpandedQuery const& query, TitleMatch mode)
{
    if (mode == TitleMatch::original_only && !query.disease_surfaces.empty()) {
        return {query.disease_surfaces.front()};
    }
    return query.disease_surfaces;
}

RankedList apply_title_penalty(RankedList ranked, CorpusStore const& store,
                               std::span<std::string const> disease_surfaces, double factor)
{
    if (!(factor > 0.0 && factor <= 1.0)) {
        throw Error("penalty factor must lie in (0, 1]");
    }
    for (auto& entry : ranked.entries) {
        if (!title_mentions_disease(lookup(store, entry.doc_id).title, disease_surfaces)) {
            entry.score *= factor;
        }
    }
    std::stable_sort(ranked.entries.begin(), ranked.entries.end(), ranks_before);
    return ranked;
}

std::vector<double> min_max_scale(std::span<double const> scores)
{
    if (scores.empty()) {
        throw Error("cannot scale an empty score list");
    }
    auto const [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    double const min = *lo;
    double const range = *hi - *lo;
    std::vector<double> out;
    out.reserve(scores.size());
    for (double s : scores) {
        out.push_back(range > 0.0 ? (s - min) / range : 0.0);
    }
    return out;
}

RankedList min_max_scale(RankedList ranked)
{
    if (ranked.entries.empty()) {
        return ranked;
    }
    std::vector<double> scores;
    scores.reserve(ranked.entries.size());
    for (auto const& e : ranked.entries) {
        scores.push_back(e.score);
    }
    auto const scaled = min_max_scale(scores);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        ranked.entries[i].score = scaled[i];
    }
    return ranked;
}

RankedList rerank_top_k(RankedList ranked, LogisticModel const& model, CorpusStore const& store,
                        std::span<std::string const> disease_surfaces, KeywordLists const& keywords, std::size_t k)
{
    auto const head = static_cast<std::ptrdiff_t>(std::min(k, ranked.entries.size()));
    for (auto it = ranked.entries.begin(); it != ranked.entries.begin() + head; ++it) {
        auto const features = extract_features(lookup(store, it->doc_id), disease_surfaces, keywords);
        it->score += model.predict_prob(features);
    }
    std::stable_sort(ranked.entries.begin(), ranked.entries.begin() + head, ranks_before);
    return ranked;
}

RankedList rerank_pipeline(RankedList raw, LogisticModel const& model, CorpusStore const& store,
                           std::span<std::string const> disease_surfaces, KeywordLists const& keywords,
                           RerankConfig const& config)
{
    config.validate();
    auto penalized = apply_title_penalty(std::move(raw), store, disease_surfaces, config.penalty_factor);
    auto scaled = min_max_scale(std::move(penalized));
    return rerank_top_k(std::move(scaled), model, store, disease_surfaces, keywords, config.top_k);
}

TrainingSet build_training_set(std::span<ExpandedQuery const> queries, Qrels const& qrels, CorpusStore const& store,
                               KeywordLists const& keywords, TitleMatch mode)
{
    TrainingSet set;
    for (auto const& query : queries) {
        auto const surfaces = title_surfaces(query, mode);
        for (auto const& [doc_id, grade] : qrels.judgments(query.topic_number)) {
            auto const* doc = store.find(doc_id);
            if (doc == nullptr) {
                ++set.skipped_missing;
                continue;
            }
            set.examples.push_back({extract_features(*doc, surfaces, keywords), grade >= 1 ? 1 : 0});
        }
    }
    return set;
}

}  // namespace pmsearch
