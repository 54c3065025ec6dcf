#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsearch/corpus.hpp"

namespace pmsearch {

/// Keyword lists driving the count features. Entries are lower-cased.
struct KeywordLists {
    std::vector<std::string> positive;
    std::vector<std::string> negative;
    std::vector<std::string> heading;

    /// The shipped lists, one entry per table cell ("drug therapy" appears twice).
    [[nodiscard]] static KeywordLists defaults();
    /// JSON object with `positive`, `negative` and `heading` string arrays.
    /// Missing arrays fall back to the defaults.
    [[nodiscard]] static KeywordLists from_json(std::string const& text);
    [[nodiscard]] std::string to_json() const;

    friend bool operator==(KeywordLists const&, KeywordLists const&) = default;
};

inline constexpr std::size_t kFeatureCount = 7;

[[nodiscard]] std::array<std::string_view, kFeatureCount> feature_names();

struct FeatureVector {
    double disease_in_title = 0;  // {0, 1}
    double pos_in_title = 0;
    double pos_in_abstract = 0;
    double neg_in_title = 0;
    double neg_in_abstract = 0;
    double is_clinical_trial = 0;  // {0, 1}
    double heading_hits = 0;

    [[nodiscard]] std::array<double, kFeatureCount> values() const
    {
        return {disease_in_title, pos_in_title, pos_in_abstract, neg_in_title,
                neg_in_abstract,  is_clinical_trial, heading_hits};
    }

    friend bool operator==(FeatureVector const&, FeatureVector const&) = default;
};

/// True iff some surface, tokenized, occurs as a contiguous token run in the
/// tokenized title.
[[nodiscard]] bool title_mentions_disease(std::string_view title, std::span<std::string const> disease_surfaces);

[[nodiscard]] FeatureVector extract_features(DocumentRecord const& doc, std::span<std::string const> disease_surfaces,
                                             KeywordLists const& keywords);

}  // namespace pmsearch
