#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsearch/corpus.hpp"
#include "pmsearch/query.hpp"
#include "pmsearch/ranked_list.hpp"
#include "pmsearch/tokenizer.hpp"

namespace pmsearch {

enum class Field { title = 0, abstract = 1 };

inline constexpr std::size_t kRetrievalDepth = 1000;

struct Bm25Params {
    double k1 = 1.25;
    double b = 0.75;
    /// Floor negative IDF values (terms in more than half the collection) at 0.
    bool clamp_idf = true;

    /// Throws pmsearch::Error unless k1 > 0 and 0 <= b <= 1.
    void validate() const;

    friend bool operator==(Bm25Params const&, Bm25Params const&) = default;
};

struct Posting {
    std::uint32_t doc;  // ordinal into FieldedIndex::store()
    std::uint32_t tf;

    friend bool operator==(Posting const&, Posting const&) = default;
};

/// BM25 term weight for one field of one document. Returns 0 when `tf` is 0
/// or the field collection is empty.
[[nodiscard]] double bm25_term_score(double idf, std::uint32_t tf, std::uint32_t field_length, double avgdl,
                                     Bm25Params const& params);

/// log((N - n + 0.5) / (n + 0.5)), optionally floored at zero.
[[nodiscard]] double bm25_idf(std::size_t doc_count, std::size_t doc_freq, bool clamp);

/// Inverted index over the analyzed title and abstract fields. Documents are
/// numbered by ascending id, so every posting list is sorted by id. The other
/// fields are stored but not searchable.
class FieldedIndex {
  public:
    [[nodiscard]] static FieldedIndex build(CorpusStore const& store, Bm25Params params = {},
                                            bool remove_stopwords = true);

    void save(std::filesystem::path const& dir) const;
    [[nodiscard]] static FieldedIndex load(std::filesystem::path const& dir);

    [[nodiscard]] std::string serialize_stats() const;
    [[nodiscard]] std::string serialize_postings() const;
    [[nodiscard]] std::string serialize_stored() const;

    [[nodiscard]] Bm25Params const& params() const { return m_params; }
    [[nodiscard]] Tokenizer const& tokenizer() const { return m_tokenizer; }
    /// Stored documents, sorted by id; position is the document ordinal.
    [[nodiscard]] CorpusStore const& store() const { return m_store; }
    [[nodiscard]] std::optional<std::uint32_t> ordinal(std::string_view doc_id) const;

    [[nodiscard]] std::size_t doc_count(Field field) const;
    [[nodiscard]] double avg_field_length(Field field) const;
    [[nodiscard]] std::uint32_t field_length(std::uint32_t doc, Field field) const;

    [[nodiscard]] std::span<Posting const> postings(Field field, std::string_view term) const;
    [[nodiscard]] std::size_t document_frequency(Field field, std::string_view term) const
    {
        return postings(field, term).size();
    }
    [[nodiscard]] std::size_t vocabulary_size(Field field) const;

    [[nodiscard]] double idf(Field field, std::string_view term) const;
    [[nodiscard]] double bm25_clause_score(std::string_view doc_id, Field field, std::string_view term) const;

    /// OR query over all clause tokens. Only documents with at least one
    /// clause token in the abstract are candidates; each candidate scores the
    /// weighted BM25 sum over both fields. Throws if the query has no clauses.
    [[nodiscard]] RankedList search(ExpandedQuery const& query, std::size_t limit = kRetrievalDepth) const;

  private:
    using PostingMap = std::map<std::string, std::vector<Posting>, std::less<>>;

    struct FieldData {
        PostingMap postings;
        std::vector<std::uint32_t> lengths;
        double avgdl = 0.0;
    };

    FieldedIndex() = default;
    void finalize_stats();
    [[nodiscard]] FieldData const& data(Field field) const { return m_fields[static_cast<std::size_t>(field)]; }

    Bm25Params m_params;
    bool m_remove_stopwords = true;
    Tokenizer m_tokenizer;
    CorpusStore m_store;
    FieldData m_fields[2];
};

}  // namespace pmsearch
