#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pmsearch {

/// One abstract-level article. `abstract` is the searchable content field.
struct DocumentRecord {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<std::string> pub_types;
    std::vector<std::string> mesh;

    friend bool operator==(DocumentRecord const&, DocumentRecord const&) = default;
};

/// A patient case. The demographic text is kept verbatim and never searched.
struct Topic {
    int number = 0;
    std::string disease;
    std::string gene;
    std::string demographic;

    friend bool operator==(Topic const&, Topic const&) = default;
};

struct IngestError {
    std::size_t record;  // 1-based position in the input stream
    std::string message;
};

/// Documents keyed by id. The first record seen for an id wins; later
/// records with the same id are counted and dropped.
class CorpusStore {
  public:
    /// Returns false if the record was rejected or was a duplicate.
    bool add(DocumentRecord record);

    /// Records a rejected input (for example a line without an id).
    void reject(std::size_t record, std::string message);

    [[nodiscard]] DocumentRecord const* find(std::string_view id) const;
    [[nodiscard]] bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Records in ingestion order.
    [[nodiscard]] std::span<DocumentRecord const> documents() const { return m_docs; }
    [[nodiscard]] std::size_t size() const { return m_docs.size(); }
    [[nodiscard]] bool empty() const { return m_docs.empty(); }
    [[nodiscard]] std::size_t kept() const { return m_docs.size(); }
    [[nodiscard]] std::size_t discarded() const { return m_discarded; }
    [[nodiscard]] std::span<IngestError const> errors() const { return m_errors; }

  private:
    std::vector<DocumentRecord> m_docs;
    std::unordered_map<std::string, std::size_t> m_by_id;
    std::size_t m_seen = 0;
    std::size_t m_discarded = 0;
    std::vector<IngestError> m_errors;
};

[[nodiscard]] CorpusStore ingest_documents(std::span<DocumentRecord const> records);

/// Reads newline-delimited JSON documents with keys `id`, `title`,
/// `abstract`, `pub_types` and `mesh`. Lines that are not valid JSON or lack
/// an id are recorded in `errors()` and skipped.
[[nodiscard]] CorpusStore read_documents(std::istream& in);

[[nodiscard]] std::string document_to_json(DocumentRecord const& doc);

/// Parses `<topics><topic number="N"><disease/><gene/><demographic/></topic></topics>`.
/// Throws ParseError on malformed XML or a topic lacking disease or gene.
[[nodiscard]] std::vector<Topic> parse_topics(std::string const& xml);

[[nodiscard]] DocumentRecord const* get_document(CorpusStore const& store, std::string_view id);

}  // namespace pmsearch
