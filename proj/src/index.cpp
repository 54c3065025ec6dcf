#include "pmsearch/index.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

namespace pmsearch {

namespace {

constexpr char const* kFormat = "pmsearch-index-1";
constexpr char const* kStatsFile = "stats.json";
constexpr char const* kPostingsFile = "postings.txt";
constexpr char const* kStoredFile = "stored.jsonl";

constexpr std::array<Field, 2> kFields = {Field::title, Field::abstract};

char const* field_name(Field field) { return field == Field::title ? "title" : "abstract"; }

Field parse_field(std::string_view name, std::size_t line)
{
    if (name == "title") {
        return Field::title;
    }
    if (name == "abstract") {
        return Field::abstract;
    }
    throw ParseError("unknown field '" + std::string(name) + "'", line);
}

std::string const& field_text(DocumentRecord const& doc, Field field)
{
    return field == Field::title ? doc.title : doc.abstract;
}

std::uint32_t parse_u32(std::string_view text, std::size_t line)
{
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("bad integer '" + std::string(text) + "'", line);
    }
    return value;
}

}  // namespace

void Bm25Params::validate() const
{
    if (!(k1 > 0.0) || !std::isfinite(k1)) {
        throw Error("BM25 k1 must be positive");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw Error("BM25 b must lie in [0, 1]");
    }
}

double bm25_idf(std::size_t doc_count, std::size_t doc_freq, bool clamp)
{
    auto const n = static_cast<double>(doc_freq);
    auto const big_n = static_cast<double>(doc_count);
    double const value = std::log((big_n - n + 0.5) / (n + 0.5));
    return clamp ? std::max(0.0, value) : value;
}

double bm25_term_score(double idf, std::uint32_t tf, std::uint32_t field_length, double avgdl,
                       Bm25Params const& params)
{
    if (tf == 0 || avgdl <= 0.0) {
        return 0.0;
    }
    auto const f = static_cast<double>(tf);
    auto const len = static_cast<double>(field_length);
    return idf * (f * (params.k1 + 1.0)) / (f + params.k1 * (1.0 - params.b + params.b * len / avgdl));
}

FieldedIndex FieldedIndex::build(CorpusStore const& store, Bm25Params params, bool remove_stopwords)
{
    params.validate();
    FieldedIndex index;
    index.m_params = params;
    index.m_remove_stopwords = remove_stopwords;
    index.m_tokenizer = Tokenizer(remove_stopwords);

    std::vector<DocumentRecord const*> sorted;
    sorted.reserve(store.size());
    for (auto const& doc : store.documents()) {
        sorted.push_back(&doc);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });

    for (auto const* doc : sorted) {
        auto const ordinal = static_cast<std::uint32_t>(index.m_store.size());
        index.m_store.add(*doc);
        for (auto field : kFields) {
            auto& fd = index.m_fields[static_cast<std::size_t>(field)];
            auto tokens = index.m_tokenizer(field_text(*doc, field));
            fd.lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
            std::map<std::string_view, std::uint32_t> counts;
            for (auto const& tok : tokens) {
                ++counts[tok];
            }
            for (auto const& [term, tf] : counts) {
                auto it = fd.postings.find(term);
                if (it == fd.postings.end()) {
                    it = fd.postings.emplace(std::string(term), std::vector<Posting>{}).first;
                }
                it->second.push_back({ordinal, tf});
            }
        }
    }
    index.finalize_stats();
    return index;
}

void FieldedIndex::finalize_stats()
{
    for (auto& fd : m_fields) {
        auto const total = std::accumulate(fd.lengths.begin(), fd.lengths.end(), std::uint64_t{0});
        fd.avgdl = fd.lengths.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(fd.lengths.size());
    }
}

std::optional<std::uint32_t> FieldedIndex::ordinal(std::string_view doc_id) const
{
    auto docs = m_store.documents();
    auto it = std::lower_bound(docs.begin(), docs.end(), doc_id,
                               [](DocumentRecord const& d, std::string_view id) { return d.id < id; });
    if (it == docs.end() || it->id != doc_id) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - docs.begin());
}

std::size_t FieldedIndex::doc_count(Field field) const { return data(field).lengths.size(); }

double FieldedIndex::avg_field_length(Field field) const { return data(field).avgdl; }

std::uint32_t FieldedIndex::field_length(std::uint32_t doc, Field field) const { return data(field).lengths.at(doc); }

std::span<Posting const> FieldedIndex::postings(Field field, std::string_view term) const
{
    auto const& map = data(field).postings;
    auto it = map.find(term);
    if (it == map.end()) {
        return {};
    }
    return it->second;
}

std::size_t FieldedIndex::vocabulary_size(Field field) const { return data(field).postings.size(); }

double FieldedIndex::idf(Field field, std::string_view term) const
{
    return bm25_idf(doc_count(field), document_frequency(field, term), m_params.clamp_idf);
}

double FieldedIndex::bm25_clause_score(std::string_view doc_id, Field field, std::string_view term) const
{
    auto doc = ordinal(doc_id);
    if (!doc) {
        return 0.0;
    }
    auto list = postings(field, term);
    auto it = std::lower_bound(list.begin(), list.end(), *doc, [](Posting const& p, std::uint32_t d) { return p.doc < d; });
    if (it == list.end() || it->doc != *doc) {
        return 0.0;
    }
    return bm25_term_score(idf(field, term), it->tf, field_length(*doc, field), avg_field_length(field), m_params);
}

RankedList FieldedIndex::search(ExpandedQuery const& query, std::size_t limit) const
{
    if (query.clauses.empty()) {
        throw Error("query for topic " + std::to_string(query.topic_number) + " has no clauses");
    }
    RankedList result{query.topic_number, {}};
    if (limit == 0) {
        return result;
    }

    std::vector<double> scores(m_store.size(), 0.0);
    std::vector<char> in_abstract(m_store.size(), 0);
    for (auto const& clause : query.clauses) {
        for (auto const& token : m_tokenizer(clause.surface)) {
            for (auto field : kFields) {
                auto const& fd = data(field);
                auto list = postings(field, token);
                if (list.empty()) {
                    continue;
                }
                double const term_idf = bm25_idf(fd.lengths.size(), list.size(), m_params.clamp_idf);
                for (auto const& p : list) {
                    scores[p.doc] += clause.weight * bm25_term_score(term_idf, p.tf, fd.lengths[p.doc], fd.avgdl, m_params);
                    if (field == Field::abstract) {
                        in_abstract[p.doc] = 1;
                    }
                }
            }
        }
    }

    auto docs = m_store.documents();
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (in_abstract[d]) {
            result.entries.push_back({docs[d].id, scores[d]});
        }
    }
    auto const keep = std::min(limit, result.entries.size());
    std::partial_sort(result.entries.begin(), result.entries.begin() + static_cast<std::ptrdiff_t>(keep),
                      result.entries.end(), ranks_before);
    result.entries.resize(keep);
    return result;
}

std::string FieldedIndex::serialize_stats() const
{
    nlohmann::ordered_json stats;
    stats["format"] = kFormat;
    stats["params"] = {{"k1", m_params.k1}, {"b", m_params.b}, {"clamp_idf", m_params.clamp_idf}};
    stats["remove_stopwords"] = m_remove_stopwords;
    stats["doc_count"] = m_store.size();
    for (auto field : kFields) {
        stats["field_lengths"][field_name(field)] = data(field).lengths;
    }
    return stats.dump(1) + "\n";
}

std::string FieldedIndex::serialize_postings() const
{
    std::string out;
    for (auto field : kFields) {
        for (auto const& [term, list] : data(field).postings) {
            out += field_name(field);
            out += '\t';
            out += term;
            out += '\t';
            out += std::to_string(list.size());
            out += '\t';
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (i > 0) {
                    out += ' ';
                }
                out += std::to_string(list[i].doc);
                out += ':';
                out += std::to_string(list[i].tf);
            }
            out += '\n';
        }
    }
    return out;
}

std::string FieldedIndex::serialize_stored() const
{
    std::string out;
    for (auto const& doc : m_store.documents()) {
        out += document_to_json(doc);
        out += '\n';
    }
    return out;
}

void FieldedIndex::save(std::filesystem::path const& dir) const
{
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / kStoredFile, serialize_stored());
    write_file_atomic(dir / kPostingsFile, serialize_postings());
    write_file_atomic(dir / kStatsFile, serialize_stats());
}

FieldedIndex FieldedIndex::load(std::filesystem::path const& dir)
{
    FieldedIndex index;

    nlohmann::json stats;
    try {
        stats = nlohmann::json::parse(read_file(dir / kStatsFile));
        if (stats.at("format").get<std::string>() != kFormat) {
            throw ParseError("unsupported index format in " + (dir / kStatsFile).string());
        }
        index.m_params.k1 = stats.at("params").at("k1").get<double>();
        index.m_params.b = stats.at("params").at("b").get<double>();
        index.m_params.clamp_idf = stats.at("params").at("clamp_idf").get<bool>();
        index.m_remove_stopwords = stats.at("remove_stopwords").get<bool>();
        for (auto field : kFields) {
            index.m_fields[static_cast<std::size_t>(field)].lengths =
                stats.at("field_lengths").at(field_name(field)).get<std::vector<std::uint32_t>>();
        }
    } catch (nlohmann::json::exception const& e) {
        throw ParseError("bad index stats: " + std::string(e.what()));
    }
    index.m_params.validate();
    index.m_tokenizer = Tokenizer(index.m_remove_stopwords);

    std::istringstream stored(read_file(dir / kStoredFile));
    index.m_store = read_documents(stored);
    if (!index.m_store.errors().empty()) {
        auto const& err = index.m_store.errors().front();
        throw ParseError("bad stored document: " + err.message, err.record);
    }
    auto const doc_count = stats.at("doc_count").get<std::size_t>();
    if (index.m_store.size() != doc_count) {
        throw ParseError("stored document count does not match index stats");
    }
    for (auto const& fd : index.m_fields) {
        if (fd.lengths.size() != doc_count) {
            throw ParseError("field length table does not match index stats");
        }
    }
    auto docs = index.m_store.documents();
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (!(docs[i - 1].id < docs[i].id)) {
            throw ParseError("stored documents are not sorted by id", i + 1);
        }
    }

    std::istringstream postings(read_file(dir / kPostingsFile));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(postings, line)) {
        ++lineno;
        std::vector<std::string_view> cols;
        std::string_view rest = line;
        for (int i = 0; i < 3; ++i) {
            auto tab = rest.find('\t');
            if (tab == std::string_view::npos) {
                throw ParseError("postings line needs 4 tab-separated columns", lineno);
            }
            cols.push_back(rest.substr(0, tab));
            rest.remove_prefix(tab + 1);
        }
        auto& fd = index.m_fields[static_cast<std::size_t>(parse_field(cols[0], lineno))];
        auto const df = parse_u32(cols[2], lineno);
        std::vector<Posting> list;
        list.reserve(df);
        while (!rest.empty()) {
            auto space = rest.find(' ');
            auto entry = rest.substr(0, space);
            auto colon = entry.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError("bad posting '" + std::string(entry) + "'", lineno);
            }
            Posting p{parse_u32(entry.substr(0, colon), lineno), parse_u32(entry.substr(colon + 1), lineno)};
            if (p.doc >= doc_count || p.tf == 0 || (!list.empty() && list.back().doc >= p.doc)) {
                throw ParseError("invalid posting '" + std::string(entry) + "'", lineno);
            }
            list.push_back(p);
            rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
        }
        if (list.size() != df) {
            throw ParseError("document frequency does not match posting count", lineno);
        }
        if (!fd.postings.emplace(std::string(cols[1]), std::move(list)).second) {
            throw ParseError("duplicate term '" + std::string(cols[1]) + "'", lineno);
        }
    }
    index.finalize_stats();
    return index;
}

}  // namespace pmsearch
