#pragma once

#include <string>
#include <vector>

namespace pmsearch {

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(ScoredDoc const&, ScoredDoc const&) = default;
};

/// Per-topic ranking: scores non-increasing, ties ordered by ascending doc id.
struct RankedList {
    int topic_number = 0;
    std::vector<ScoredDoc> entries;

    friend bool operator==(RankedList const&, RankedList const&) = default;
};

/// Descending score, ascending doc id on ties.
inline bool ranks_before(ScoredDoc const& lhs, ScoredDoc const& rhs)
{
    if (lhs.score != rhs.score) {
        return lhs.score > rhs.score;
    }
    return lhs.doc_id < rhs.doc_id;
}

}  // namespace pmsearch
