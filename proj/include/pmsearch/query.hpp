#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pmsearch {

enum class ClauseOrigin {
    disease_original,
    disease_preferred,
    disease_synonym,
    disease_acronym,
    gene_original,
    gene_alias,
};

[[nodiscard]] std::string_view to_string(ClauseOrigin origin);
[[nodiscard]] bool is_disease_origin(ClauseOrigin origin);

/// One OR-ed surface form of the query. Multi-word surfaces are scored as the
/// sum of their tokens; there is no phrase matching.
struct WeightedClause {
    std::string surface;
    double weight = 1.0;
    ClauseOrigin origin = ClauseOrigin::disease_original;

    friend bool operator==(WeightedClause const&, WeightedClause const&) = default;
};

struct ExpandedQuery {
    int topic_number = 0;
    std::vector<WeightedClause> clauses;
    /// Every disease surface form, original first. Used by the title tests.
    std::vector<std::string> disease_surfaces;

    friend bool operator==(ExpandedQuery const&, ExpandedQuery const&) = default;
};

}  // namespace pmsearch
