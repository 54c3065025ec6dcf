#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pmsearch/error.hpp"
#include "pmsearch/expand.hpp"
#include "pmsearch/file_util.hpp"
#include "pmsearch/index.hpp"

using namespace pmsearch;

namespace {

DiseaseKb sample_diseases()
{
    std::istringstream in(
        R"({"canonical": "cholangiocarcinoma", "preferred": "cholangiocarcinoma of biliary tract", "synonyms": ["bile duct carcinoma", "bile duct adenocarcinoma", "cholangiocellular carcinoma"], "acronyms": []}
{"canonical": "Lung Cancer", "preferred": "malignant neoplasm of lung", "synonyms": ["non-small cell lung cancer", "Malignant Neoplasm of Lung"], "acronyms": ["NSCLC"]}
{"canonical": "melanoma", "preferred": "melanoma", "synonyms": []}
)");
    return load_disease_kb(in);
}

GeneTable sample_genes()
{
    std::istringstream in("#tax_id symbol\n"
                          "KRAS\tC-K-RAS|CFC2|K-RAS2A|K-RAS2B|K-RAS4A|K-RAS4B|K-Ras|KI-RAS|KRAS1|KRAS2|NS|NS3|RALD|c-Ki-ras2\n"
                          "ERBB2\tCD340|HER-2|HER-2/neu|HER2|NEU|NGL|TKR1\n"
                          "BRAF\tB-RAF1|BRAF1\n"
                          "FOO\t-\n");
    return load_gene_aliases(in);
}

std::vector<std::string> surfaces_with(ExpandedQuery const& q, ClauseOrigin origin)
{
    std::vector<std::string> out;
    for (auto const& c : q.clauses) {
        if (c.origin == origin) {
            out.push_back(c.surface);
        }
    }
    return out;
}

bool has_clause(ExpandedQuery const& q, std::string const& surface, double weight, ClauseOrigin origin)
{
    return std::any_of(q.clauses.begin(), q.clauses.end(), [&](auto const& c) {
        return c.surface == surface && c.weight == weight && c.origin == origin;
    });
}

}  // namespace

TEST_CASE("default weights")
{
    ExpansionWeights w;
    CHECK(w.disease_original == 1.0);
    CHECK(w.disease_preferred == 0.1);
    CHECK(w.disease_synonym == 0.1);
    CHECK(w.disease_acronym == 0.5);
    CHECK(w.gene_original == 1.0);
    CHECK(w.gene_alias == 0.3);
    CHECK_NOTHROW(w.validate());
    w.gene_alias = 1.5;
    CHECK_THROWS_AS(w.validate(), Error);
}

TEST_CASE("disease knowledge base")
{
    auto kb = sample_diseases();
    CHECK(kb.size() == 3);
    auto const* chol = kb.find("Cholangiocarcinoma");
    REQUIRE(chol);
    CHECK(chol->preferred == "cholangiocarcinoma of biliary tract");
    CHECK(std::find(chol->synonyms.begin(), chol->synonyms.end(), "bile duct carcinoma") != chol->synonyms.end());

    auto const* lung = kb.find("lung cancer");
    REQUIRE(lung);
    // Synonym repeating the preferred term is dropped.
    CHECK(lung->synonyms == std::vector<std::string>{"non-small cell lung cancer"});

    auto const* mel = kb.find("melanoma");
    REQUIRE(mel);
    CHECK(mel->preferred.empty());  // same as canonical
    CHECK(mel->synonyms.empty());
    CHECK(kb.find("glioblastoma") == nullptr);
}

TEST_CASE("disease knowledge base errors carry line numbers")
{
    std::istringstream dup(R"({"canonical": "a"}
{"canonical": "A"})");
    CHECK_THROWS_WITH(load_disease_kb(dup), doctest::Contains("line 2"));
    std::istringstream bad("{\"canonical\": \"a\"}\n\n{not json\n");
    CHECK_THROWS_WITH(load_disease_kb(bad), doctest::Contains("line 3"));
    std::istringstream missing(R"({"preferred": "x"})");
    CHECK_THROWS_AS(load_disease_kb(missing), ParseError);
}

TEST_CASE("gene alias table")
{
    auto genes = sample_genes();
    auto const* kras = genes.find("KRAS");
    REQUIRE(kras);
    for (auto const* alias : {"KRAS2", "K-Ras", "C-K-RAS"}) {
        CHECK(std::find(kras->aliases.begin(), kras->aliases.end(), alias) != kras->aliases.end());
    }
    CHECK(kras->aliases.size() == 14);
    CHECK(genes.find("kras") == kras);
    REQUIRE(genes.find("FOO"));
    CHECK(genes.find("FOO")->aliases.empty());

    std::istringstream bad("KRAS\tA|B\nBROKEN\n");
    CHECK_THROWS_WITH(load_gene_aliases(bad), doctest::Contains("line 2"));
    std::istringstream extra("KRAS\tA\tB\n");
    CHECK_THROWS_AS(load_gene_aliases(extra), ParseError);

    std::istringstream dups("X\tA| A |B|A\nX\ta|B\n");
    auto merged = load_gene_aliases(dups);
    CHECK(merged.find("x")->aliases == std::vector<std::string>{"A", "B", "a"});
}

TEST_CASE("acronym mining")
{
    std::vector<DocumentRecord> docs = {
        {"1", "", "elevated in non-small cell lung carcinomas (NSCLC). ROS1 in NSCLC.", {}, {}},
    };
    auto store = ingest_documents(docs);
    CHECK(mine_acronyms(store, "non-small cell lung carcinomas") == std::vector<AcronymCount>{{"NSCLC", 1}});
    CHECK_THROWS_AS((void)mine_acronyms(store, "  "), Error);

    std::vector<DocumentRecord> none = {{"1", "lung cancer", "lung cancer [NSCLC] and lung cancer (nsclc)", {}, {}}};
    CHECK(mine_acronyms(ingest_documents(none), "lung cancer").empty());
}

TEST_CASE("mined acronyms are ordered by frequency")
{
    std::vector<DocumentRecord> docs;
    for (int i = 0; i < 5; ++i) {
        docs.push_back({"a" + std::to_string(i), "Lung Cancer  (LC) study", "", {}, {}});
    }
    for (int i = 0; i < 2; ++i) {
        docs.push_back({"b" + std::to_string(i), "", "in lung cancer\n(LUCA) patients", {}, {}});
    }
    docs.push_back({"c", "", "lung cancer (A) and lung cancer (ABCDEFGHIJK) are not acronyms", {}, {}});
    auto mined = mine_acronyms(ingest_documents(docs), "lung cancer");
    CHECK(mined == std::vector<AcronymCount>{{"LC", 5}, {"LUCA", 2}});
}

TEST_CASE("gene field splitting")
{
    using V = std::vector<std::string>;
    CHECK(split_gene_field("ERBB2") == V{"ERBB2"});
    CHECK(split_gene_field("BRAF (V600E)") == V{"BRAF", "V600E"});
    CHECK(split_gene_field("FGFR1 Amplification, PTEN (Q214*)") == V{"FGFR1 Amplification", "PTEN", "Q214*"});
    CHECK(split_gene_field("CDK4 and MDM2 amplification") == V{"CDK4", "MDM2 amplification"});
    CHECK(split_gene_field("BRAND") == V{"BRAND"});
    CHECK(split_gene_field(" , and ,").empty());
}

TEST_CASE("expanding topic 36")
{
    Topic topic{36, "lung cancer", "ERBB2", "64-year-old male"};
    std::vector<AcronymCount> mined = {{"NSCLC", 12}, {"LC", 3}};
    auto q = expand_topic(topic, sample_diseases(), sample_genes(), mined);
    CHECK(q.topic_number == 36);
    CHECK(q.clauses.front() == WeightedClause{"lung cancer", 1.0, ClauseOrigin::disease_original});
    CHECK(has_clause(q, "ERBB2", 1.0, ClauseOrigin::gene_original));
    CHECK(has_clause(q, "HER-2/neu", 0.3, ClauseOrigin::gene_alias));
    CHECK(has_clause(q, "malignant neoplasm of lung", 0.1, ClauseOrigin::disease_preferred));
    CHECK(has_clause(q, "non-small cell lung cancer", 0.1, ClauseOrigin::disease_synonym));
    CHECK(has_clause(q, "NSCLC", 0.5, ClauseOrigin::disease_acronym));
    // Only the most frequent mined acronym, and NSCLC (also in the KB) appears once.
    CHECK(surfaces_with(q, ClauseOrigin::disease_acronym) == std::vector<std::string>{"NSCLC"});
    CHECK(q.disease_surfaces ==
          std::vector<std::string>{"lung cancer", "malignant neoplasm of lung", "non-small cell lung cancer", "NSCLC"});
}

TEST_CASE("degenerate and restricted expansion")
{
    Topic topic{1, "glioblastoma", "IDH1", ""};
    auto q = expand_topic(topic, sample_diseases(), sample_genes(), {});
    CHECK(q.clauses == std::vector<WeightedClause>{{"glioblastoma", 1.0, ClauseOrigin::disease_original},
                                                   {"IDH1", 1.0, ClauseOrigin::gene_original}});

    Topic lung{36, "lung cancer", "ERBB2", ""};
    std::vector<AcronymCount> mined = {{"LC", 3}};
    auto base = expand_topic(lung, sample_diseases(), sample_genes(), mined, {}, ExpansionMode::original_only());
    CHECK(base.clauses.size() == 2);
    CHECK(base.disease_surfaces == std::vector<std::string>{"lung cancer"});

    auto no_acr = expand_topic(lung, sample_diseases(), sample_genes(), mined, {}, {true, false});
    CHECK(surfaces_with(no_acr, ClauseOrigin::disease_acronym).empty());
    CHECK_FALSE(surfaces_with(no_acr, ClauseOrigin::gene_alias).empty());

    CHECK_THROWS_AS((void)expand_topic(Topic{2, "x", " , ", ""}, sample_diseases(), sample_genes(), {}), Error);
}

TEST_CASE("duplicate surfaces keep the heaviest origin")
{
    DiseaseKb kb;
    kb.add({"breast cancer", "breast carcinoma", {"Breast Carcinoma", "BRCA"}, {}});
    GeneTable genes;
    genes.add({"BRCA1", {"BRCA", "RNF53"}});
    auto q = expand_topic(Topic{5, "breast cancer", "BRCA1", ""}, kb, genes, {});
    // "BRCA" is both a synonym (0.1) and a gene alias (0.3).
    CHECK(has_clause(q, "BRCA", 0.3, ClauseOrigin::gene_alias));
    CHECK_FALSE(has_clause(q, "BRCA", 0.1, ClauseOrigin::disease_synonym));
    CHECK(std::count_if(q.clauses.begin(), q.clauses.end(),
                        [](auto const& c) { return to_lower_ascii(c.surface) == "breast carcinoma"; }) == 1);
}

TEST_CASE("variant tokens become full-weight gene clauses and multi-word genes fall back to the symbol")
{
    auto q = expand_topic(Topic{3, "melanoma", "BRAF (V600E), KRAS amplification", ""}, sample_diseases(),
                          sample_genes(), {});
    CHECK(has_clause(q, "BRAF", 1.0, ClauseOrigin::gene_original));
    CHECK(has_clause(q, "V600E", 1.0, ClauseOrigin::gene_original));
    CHECK(has_clause(q, "KRAS amplification", 1.0, ClauseOrigin::gene_original));
    CHECK(has_clause(q, "B-RAF1", 0.3, ClauseOrigin::gene_alias));
    CHECK(has_clause(q, "KRAS2", 0.3, ClauseOrigin::gene_alias));
}

TEST_CASE("expansion properties")
{
    std::mt19937 rng(11);
    auto const diseases = sample_diseases();
    auto const genes = sample_genes();
    std::vector<Topic> topics = {{36, "lung cancer", "ERBB2", ""},
                                 {2, "cholangiocarcinoma", "KRAS", ""},
                                 {3, "melanoma", "BRAF (V600E)", ""},
                                 {4, "glioma", "IDH1", ""}};
    for (int trial = 0; trial < 50; ++trial) {
        auto docs = oracle::random_corpus(rng, 60);
        docs.push_back({"z1", "", "HER-2/neu in NSCLC, bile duct carcinoma and K-Ras", {}, {}});
        auto store = ingest_documents(docs);
        auto index = FieldedIndex::build(store);
        for (auto const& topic : topics) {
            auto mined = mine_acronyms(store, topic.disease);
            auto expanded = expand_topic(topic, diseases, genes, mined);
            ExpansionWeights w;
            for (auto const& c : expanded.clauses) {
                CHECK(c.weight == w.for_origin(c.origin));
                if (c.origin != ClauseOrigin::disease_original && c.origin != ClauseOrigin::gene_original) {
                    CHECK(c.weight <= 0.5);
                }
            }
            CHECK(expand_topic(topic, diseases, genes, mined) == expanded);

            auto original = expand_topic(topic, diseases, genes, mined, {}, ExpansionMode::original_only());
            std::set<std::string> wide;
            for (auto const& e : index.search(expanded, store.size() + 1).entries) {
                wide.insert(e.doc_id);
            }
            for (auto const& e : index.search(original, store.size() + 1).entries) {
                CHECK(wide.count(e.doc_id) == 1);
            }
        }
    }
}
