#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "case_study.hpp"
#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

using namespace pmsearch;

namespace {

struct Fixture {
    std::filesystem::path work = case_study::scratch_dir("pipeline");
    PipelineConfig config = case_study::config(work);
    IndexSummary indexed = cmd_index(config);
    TrainSummary trained = cmd_train(config);
    FieldedIndex index = FieldedIndex::load(config.paths.index_dir);
    KnowledgeBases kbs = load_knowledge_bases(config.paths);
    std::vector<Topic> topics = parse_topics(read_file(config.paths.topics));
    Qrels qrels = [this] {
        std::ifstream in(config.paths.qrels);
        return parse_qrels(in);
    }();

    ~Fixture() { std::filesystem::remove_all(work); }

    RankedList run(Strategy s)
    {
        auto c = config;
        c.strategy = s;
        auto lists = run_strategy(index, topics, kbs, c, &trained.model);
        REQUIRE(lists.size() == 1);
        return lists.front();
    }
};

std::ptrdiff_t position(RankedList const& r, std::string const& id)
{
    auto it = std::find_if(r.entries.begin(), r.entries.end(), [&](auto const& e) { return e.doc_id == id; });
    return it == r.entries.end() ? -1 : it - r.entries.begin();
}

}  // namespace

TEST_CASE("case study fixture")
{
    Fixture f;
    CHECK(f.indexed.kept == 62);
    CHECK(f.indexed.discarded == 0);
    CHECK(f.trained.examples == 14);
    CHECK(f.trained.positives == 7);
    CHECK(f.trained.train_recall == 1.0);

    SUBCASE("alias-only document needs expansion")
    {
        CHECK(position(f.run(Strategy::baseline), case_study::kAliasOnlyDoc) == -1);
        CHECK(position(f.run(Strategy::expand), case_study::kAliasOnlyDoc) >= 0);
        CHECK(position(f.run(Strategy::expand_acronym), case_study::kAliasOnlyDoc) >= 0);
    }
    SUBCASE("acronym clause only with mining")
    {
        auto const& topic = f.topics.front();
        auto has_acronym = [](ExpandedQuery const& q) {
            return std::any_of(q.clauses.begin(), q.clauses.end(),
                               [](auto const& c) { return c.origin == ClauseOrigin::disease_acronym; });
        };
        CHECK_FALSE(has_acronym(build_query(topic, f.index.store(), f.kbs, f.config.weights, Strategy::expand)));
        auto q = build_query(topic, f.index.store(), f.kbs, f.config.weights, Strategy::expand_acronym);
        CHECK(has_acronym(q));
        CHECK(std::find(q.disease_surfaces.begin(), q.disease_surfaces.end(), "NSCLC") != q.disease_surfaces.end());
    }
    SUBCASE("title penalty pushes the breast cancer article down")
    {
        auto const before = position(f.run(Strategy::expand_acronym), case_study::kBreastCancerDoc);
        auto const after = position(f.run(Strategy::heuristic), case_study::kBreastCancerDoc);
        CHECK(before >= 0);
        CHECK(before < 10);
        CHECK(after >= 10);
    }
    SUBCASE("reranking lifts precision")
    {
        CHECK(precision_at_k(f.run(Strategy::heuristic), f.qrels, case_study::kTopic) == doctest::Approx(0.2));
        CHECK(precision_at_k(f.run(Strategy::full), f.qrels, case_study::kTopic) == doctest::Approx(0.5));
        // The retrieved set is the same; only the order changes.
        auto h = f.run(Strategy::heuristic);
        auto full = f.run(Strategy::full);
        CHECK(h.entries.size() == full.entries.size());
    }
    SUBCASE("full needs a model")
    {
        auto c = f.config;
        c.strategy = Strategy::full;
        CHECK_THROWS_AS((void)run_strategy(f.index, f.topics, f.kbs, c, nullptr), Error);
    }
    SUBCASE("run and eval commands")
    {
        auto c = f.config;
        auto const run = cmd_run(c);
        CHECK(std::filesystem::exists(run));
        auto const report = cmd_eval(c, run);
        REQUIRE(report.topics.size() == 1);
        CHECK(report.topics[0].p10 == doctest::Approx(0.5));
        CHECK(std::filesystem::exists(metrics_path(run)));
        CHECK(MetricsReport::from_json(read_file(metrics_path(run))).to_json() == report.to_json());
    }
}

TEST_CASE("missing inputs are reported by name")
{
    auto work = case_study::scratch_dir("pipeline-missing");
    auto c = case_study::config(work);
    c.paths.corpus = work / "absent.jsonl";
    CHECK_THROWS_WITH_AS(cmd_index(c), doctest::Contains("absent.jsonl"), Error);
    CHECK_THROWS_WITH_AS(cmd_run(c), doctest::Contains("index"), Error);
    c.paths.index_dir.clear();
    CHECK_THROWS_WITH_AS(cmd_train(c), doctest::Contains("index"), Error);
    std::filesystem::remove_all(work);
}
