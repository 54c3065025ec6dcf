#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsearch/corpus.hpp"
#include "pmsearch/query.hpp"

namespace pmsearch {

struct DiseaseEntry {
    std::string canonical;
    std::string preferred;
    std::vector<std::string> synonyms;
    std::vector<std::string> acronyms;

    friend bool operator==(DiseaseEntry const&, DiseaseEntry const&) = default;
};

struct GeneEntry {
    std::string symbol;
    std::vector<std::string> aliases;

    friend bool operator==(GeneEntry const&, GeneEntry const&) = default;
};

/// Case-insensitive disease lookup.
class DiseaseKb {
  public:
    /// Throws Error if the canonical name is empty or already present. Repeated
    /// surface forms inside the entry are dropped (case-insensitive, first kept).
    void add(DiseaseEntry entry);
    [[nodiscard]] DiseaseEntry const* find(std::string_view disease) const;
    [[nodiscard]] std::size_t size() const { return m_entries.size(); }

  private:
    std::map<std::string, DiseaseEntry, std::less<>> m_entries;
};

/// Case-insensitive gene symbol lookup.
class GeneTable {
  public:
    /// Aliases of a symbol seen twice are merged.
    void add(GeneEntry entry);
    [[nodiscard]] GeneEntry const* find(std::string_view symbol) const;
    [[nodiscard]] std::size_t size() const { return m_entries.size(); }

  private:
    std::map<std::string, GeneEntry, std::less<>> m_entries;
};

/// One JSON object per line:
/// {"canonical": str, "preferred": str, "synonyms": [str], "acronyms": [str]}.
[[nodiscard]] DiseaseKb load_disease_kb(std::istream& in);

/// Tab-separated `symbol<TAB>aliases`, aliases pipe-delimited, `-` for none.
/// Blank lines and lines starting with '#' are skipped.
[[nodiscard]] GeneTable load_gene_aliases(std::istream& in);

struct AcronymCount {
    std::string acronym;
    std::size_t count = 0;

    friend bool operator==(AcronymCount const&, AcronymCount const&) = default;
};

/// Counts `<disease> (ACRONYM)` definitions in titles and abstracts. The
/// disease matches case-insensitively; the acronym is 2-10 capital letters.
/// Sorted by count descending, then acronym ascending.
[[nodiscard]] std::vector<AcronymCount> mine_acronyms(CorpusStore const& store, std::string_view disease);

/// Same pattern over one text; adds into `counts`.
void count_acronyms(std::string_view text, std::string_view disease_lower, std::map<std::string, std::size_t>& counts);

struct ExpansionWeights {
    double disease_original = 1.0;
    double disease_preferred = 0.1;
    double disease_synonym = 0.1;
    double disease_acronym = 0.5;
    double gene_original = 1.0;
    double gene_alias = 0.3;

    [[nodiscard]] double for_origin(ClauseOrigin origin) const;
    /// Throws Error unless every weight lies in [0, 1].
    void validate() const;

    friend bool operator==(ExpansionWeights const&, ExpansionWeights const&) = default;
};

/// Which expansion sources contribute clauses.
struct ExpansionMode {
    bool knowledge_base = true;  // preferred terms, synonyms, gene aliases
    bool acronyms = true;        // KB acronyms plus the most frequent mined acronym

    [[nodiscard]] static ExpansionMode original_only() { return {false, false}; }
};

/// Splits a gene field on commas and the word "and". A parenthesized
/// variant such as "(V600E)" becomes a term of its own.
[[nodiscard]] std::vector<std::string> split_gene_field(std::string_view gene);

/// Builds the weighted OR query for a topic. `mined` is the acronym list for
/// the topic's disease; only its first entry is used. Clauses sharing a
/// lower-cased surface collapse to the highest-weight origin.
[[nodiscard]] ExpandedQuery expand_topic(Topic const& topic, DiseaseKb const& diseases, GeneTable const& genes,
                                         std::span<AcronymCount const> mined, ExpansionWeights const& weights = {},
                                         ExpansionMode mode = {});

}  // namespace pmsearch
