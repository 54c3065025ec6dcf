#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"
#include "pmsearch/index.hpp"

using namespace pmsearch;

namespace {

CorpusStore three_docs()
{
    std::vector<DocumentRecord> docs = {
        {"a", "Lung cancer therapy", "cancer cancer therapy", {}, {}},
        {"b", "Mouse models", "mouse model", {}, {}},
        {"c", "", "tumor", {}, {}},
    };
    return ingest_documents(docs);
}

ExpandedQuery query_of(std::vector<std::string> const& surfaces)
{
    ExpandedQuery q;
    q.topic_number = 1;
    for (auto const& s : surfaces) {
        q.clauses.push_back({s, 1.0, ClauseOrigin::disease_original});
    }
    return q;
}

std::filesystem::path scratch_dir(std::string const& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("pmsearch_index_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("BM25 parameter validation")
{
    CHECK_NOTHROW(Bm25Params{}.validate());
    CHECK(Bm25Params{}.k1 == 1.25);
    CHECK(Bm25Params{}.b == 0.75);
    CHECK_THROWS_AS((Bm25Params{0.0, 0.5}.validate()), Error);
    CHECK_THROWS_AS((Bm25Params{1.0, 1.5}.validate()), Error);
    CHECK_THROWS_AS((Bm25Params{1.0, -0.1}.validate()), Error);
}

TEST_CASE("document frequency and field statistics")
{
    auto index = FieldedIndex::build(three_docs());
    // "cancer" is in the title of a and the abstract of a only.
    CHECK(index.document_frequency(Field::abstract, "cancer") == 1);
    CHECK(index.document_frequency(Field::title, "cancer") == 1);
    CHECK(index.document_frequency(Field::abstract, "mouse") == 1);
    CHECK(index.document_frequency(Field::title, "models") == 1);
    CHECK(index.document_frequency(Field::abstract, "missing") == 0);
    CHECK(index.doc_count(Field::abstract) == 3);
    CHECK(index.avg_field_length(Field::abstract) == doctest::Approx(2.0));
    // c has an empty title: length 0, no title postings.
    CHECK(index.field_length(*index.ordinal("c"), Field::title) == 0);
    CHECK(index.avg_field_length(Field::title) == doctest::Approx(5.0 / 3.0));
    auto postings = index.postings(Field::abstract, "cancer");
    REQUIRE(postings.size() == 1);
    CHECK(postings[0].tf == 2);
}

TEST_CASE("empty store and empty abstracts")
{
    auto empty = FieldedIndex::build(CorpusStore{});
    CHECK(empty.doc_count(Field::abstract) == 0);
    CHECK(empty.vocabulary_size(Field::abstract) == 0);
    CHECK(empty.search(query_of({"cancer"})).entries.empty());

    std::vector<DocumentRecord> docs = {{"x", "cancer", "", {}, {}}, {"y", "", "cancer", {}, {}}};
    auto index = FieldedIndex::build(ingest_documents(docs));
    CHECK(index.field_length(*index.ordinal("x"), Field::abstract) == 0);
    CHECK(index.avg_field_length(Field::abstract) == doctest::Approx(0.5));
    for (auto const& p : index.postings(Field::abstract, "cancer")) {
        CHECK(p.doc != *index.ordinal("x"));
    }
}

TEST_CASE("IDF")
{
    CHECK(bm25_idf(3, 1, true) == doctest::Approx(0.5108256237659907).epsilon(1e-12));
    CHECK(bm25_idf(1, 1, true) == 0.0);
    CHECK(bm25_idf(1, 1, false) == doctest::Approx(std::log(0.5 / 1.5)));
    CHECK(bm25_idf(100, 0, true) == doctest::Approx(5.303304908059076).epsilon(1e-12));

    auto index = FieldedIndex::build(three_docs());
    CHECK(index.idf(Field::abstract, "therapy") == doctest::Approx(std::log(2.5 / 1.5)));
    CHECK(index.idf(Field::abstract, "never-seen") == doctest::Approx(std::log(3.5 / 0.5)));
}

TEST_CASE("clause score matches hand arithmetic")
{
    auto index = FieldedIndex::build(three_docs());
    // idf = ln(2.5/1.5), f = 2, |D| = 3, avgdl = 2.
    CHECK(index.bm25_clause_score("a", Field::abstract, "cancer") ==
          doctest::Approx(0.6181419312798543).epsilon(1e-12));
    CHECK(index.bm25_clause_score("b", Field::abstract, "cancer") == 0.0);
    CHECK(index.bm25_clause_score("zzz", Field::abstract, "cancer") == 0.0);
}

TEST_CASE("term weight grows with tf and saturates")
{
    Bm25Params params;
    double const idf = 2.0;
    double previous = 0.0;
    for (std::uint32_t tf = 1; tf <= 5000; tf = tf < 20 ? tf + 1 : tf * 2) {
        double const s = bm25_term_score(idf, tf, 50, 40.0, params);
        CHECK(s > previous);
        CHECK(s < idf * (params.k1 + 1.0));
        previous = s;
    }
    CHECK(bm25_term_score(idf, 0, 50, 40.0, params) == 0.0);
    CHECK(bm25_term_score(idf, 3, 0, 0.0, params) == 0.0);
}

TEST_CASE("abstract match is required")
{
    std::vector<DocumentRecord> docs = {
        {"title-only", "ERBB2 in lung cancer", "unrelated words here", {}, {}},
        {"abstract-only", "unrelated", "erbb2 amplification", {}, {}},
        {"both", "ERBB2", "erbb2 amplification", {}, {}},
        {"f1", "filler", "filler text", {}, {}},
        {"f2", "filler", "filler text", {}, {}},
        {"f3", "filler", "filler text", {}, {}},
    };
    auto index = FieldedIndex::build(ingest_documents(docs));
    auto ranked = index.search(query_of({"ERBB2"}));
    REQUIRE(ranked.entries.size() == 2);
    CHECK(ranked.entries[0].doc_id == "both");
    CHECK(ranked.entries[1].doc_id == "abstract-only");
    CHECK(ranked.entries[0].score > ranked.entries[1].score);
}

TEST_CASE("search argument handling")
{
    auto index = FieldedIndex::build(three_docs());
    CHECK_THROWS_AS((void)index.search(ExpandedQuery{}), Error);
    CHECK(index.search(query_of({"cancer"}), 0).entries.empty());
    CHECK(index.search(query_of({"of the"})).entries.empty());
}

TEST_CASE("ties are broken by ascending doc id")
{
    std::vector<DocumentRecord> docs = {
        {"9", "", "braf mutation", {}, {}}, {"10", "", "braf mutation", {}, {}}, {"2", "", "other words", {}, {}}};
    auto index = FieldedIndex::build(ingest_documents(docs));
    auto ranked = index.search(query_of({"braf"}));
    REQUIRE(ranked.entries.size() == 2);
    CHECK(ranked.entries[0].score == ranked.entries[1].score);
    CHECK(ranked.entries[0].doc_id == "10");
    CHECK(ranked.entries[1].doc_id == "9");
}

TEST_CASE("search agrees with a brute-force scorer")
{
    std::mt19937 rng(20240917);
    for (int trial = 0; trial < 20; ++trial) {
        auto docs = oracle::random_corpus(rng, 120);
        auto index = FieldedIndex::build(ingest_documents(docs));
        for (int q = 0; q < 5; ++q) {
            auto query = oracle::random_query(rng, 12);
            std::size_t const limit = q == 0 ? 7 : kRetrievalDepth;
            auto got = index.search(query, limit);
            auto want = oracle::brute_force_search(docs, query, limit);
            REQUIRE(got.entries.size() == want.entries.size());
            for (std::size_t i = 0; i < got.entries.size(); ++i) {
                CHECK(got.entries[i].doc_id == want.entries[i].doc_id);
                CHECK(std::abs(got.entries[i].score - want.entries[i].score) <= 1e-9);
            }
        }
    }
}

TEST_CASE("save and load reproduce the same bytes")
{
    std::mt19937 rng(5);
    auto docs = oracle::random_corpus(rng, 80);
    docs.push_back({"with \"quotes\"", "Title", "abstract text", {"Clinical Trial"}, {"Humans"}});
    auto index = FieldedIndex::build(ingest_documents(docs), Bm25Params{1.1, 0.3, false});
    auto dir = scratch_dir("roundtrip");
    index.save(dir);
    auto loaded = FieldedIndex::load(dir);
    CHECK(loaded.serialize_stats() == index.serialize_stats());
    CHECK(loaded.serialize_postings() == index.serialize_postings());
    CHECK(loaded.serialize_stored() == index.serialize_stored());
    CHECK(loaded.params() == index.params());

    auto query = oracle::random_query(rng, 6);
    CHECK(loaded.search(query) == index.search(query));

    // Rebuilding from the same store in a different order gives identical bytes.
    std::reverse(docs.begin(), docs.end());
    auto rebuilt = FieldedIndex::build(ingest_documents(docs), Bm25Params{1.1, 0.3, false});
    CHECK(rebuilt.serialize_postings() == index.serialize_postings());
    CHECK(rebuilt.serialize_stats() == index.serialize_stats());
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt index files are rejected")
{
    auto index = FieldedIndex::build(three_docs());
    auto dir = scratch_dir("corrupt");
    index.save(dir);
    auto postings = read_file(dir / "postings.txt");

    write_file_atomic(dir / "postings.txt", "abstract\tcancer\t2\t0:2\n");
    CHECK_THROWS_AS((void)FieldedIndex::load(dir), ParseError);
    write_file_atomic(dir / "postings.txt", "abstract\tcancer\t1\t7:2\n");
    CHECK_THROWS_AS((void)FieldedIndex::load(dir), ParseError);
    write_file_atomic(dir / "postings.txt", "body\tcancer\t1\t0:2\n");
    CHECK_THROWS_AS((void)FieldedIndex::load(dir), ParseError);

    write_file_atomic(dir / "postings.txt", postings);
    CHECK_NOTHROW((void)FieldedIndex::load(dir));
    std::filesystem::remove(dir / "stats.json");
    CHECK_THROWS_AS((void)FieldedIndex::load(dir), Error);
    std::filesystem::remove_all(dir);
}
