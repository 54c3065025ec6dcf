#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsearch/ranked_list.hpp"

namespace pmsearch {

/// Graded judgments keyed by (topic, doc). A grade >= 1 counts as relevant.
class Qrels {
  public:
    /// Throws Error on a duplicate key or a negative grade.
    void add(int topic, std::string doc_id, int grade);

    [[nodiscard]] std::optional<int> grade(int topic, std::string_view doc_id) const;
    [[nodiscard]] bool is_relevant(int topic, std::string_view doc_id) const;
    [[nodiscard]] std::size_t relevant_count(int topic) const;
    [[nodiscard]] bool has_topic(int topic) const { return m_judgments.contains(topic); }
    [[nodiscard]] std::vector<int> topics() const;
    /// Judgments of one topic ordered by doc id; empty if the topic is unknown.
    [[nodiscard]] std::map<std::string, int, std::less<>> const& judgments(int topic) const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool empty() const { return m_judgments.empty(); }

  private:
    std::map<int, std::map<std::string, int, std::less<>>> m_judgments;
};

/// Whitespace-separated `topic iteration doc_id grade` lines.
[[nodiscard]] Qrels parse_qrels(std::istream& in);

struct RunEntry {
    int topic = 0;
    std::string doc_id;
    std::size_t rank = 0;  // 1-based
    double score = 0.0;
    std::string tag;

    friend bool operator==(RunEntry const&, RunEntry const&) = default;
};

/// `topic Q0 doc_id rank score tag`, scores in shortest round-trip form.
void write_run(std::ostream& out, std::span<RunEntry const> entries);
[[nodiscard]] std::string format_run_line(RunEntry const& entry);

/// Parses and validates a run file: per topic, ranks are 1..n in order,
/// scores are non-increasing and doc ids are distinct.
[[nodiscard]] std::vector<RunEntry> read_run(std::istream& in);

[[nodiscard]] std::vector<RunEntry> to_run_entries(std::span<RankedList const> lists, std::string const& tag);

/// Groups entries by topic in order of first appearance. Throws Error naming
/// the topic when an entry violates the run invariants.
[[nodiscard]] std::vector<RankedList> group_run(std::span<RunEntry const> entries);

[[nodiscard]] double precision_at_k(RankedList const& ranked, Qrels const& qrels, int topic, std::size_t k = 10);
[[nodiscard]] double recall_at_k(RankedList const& ranked, Qrels const& qrels, int topic, std::size_t k = 1000);
[[nodiscard]] double r_precision(RankedList const& ranked, Qrels const& qrels, int topic);

struct TopicMetrics {
    int topic = 0;
    double p10 = 0.0;
    double r1000 = 0.0;
    double r_prec = 0.0;
    std::size_t retrieved = 0;
    std::size_t relevant = 0;
    std::size_t relevant_retrieved = 0;
    std::size_t judged_retrieved = 0;
    std::size_t unjudged_retrieved = 0;
};

struct MetricsReport {
    std::vector<TopicMetrics> topics;
    double mean_p10 = 0.0;
    double mean_r1000 = 0.0;
    double mean_r_prec = 0.0;
    /// Topics judged in the qrels but absent from the run; excluded from the means.
    std::vector<int> missing_topics;

    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] static MetricsReport from_json(std::string const& text);
};

[[nodiscard]] MetricsReport evaluate_run(std::span<RunEntry const> run, Qrels const& qrels);

}  // namespace pmsearch
