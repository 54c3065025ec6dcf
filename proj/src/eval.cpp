#include "pmsearch/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

namespace pmsearch {

namespace {

std::vector<std::string> split_ws(std::string const& line)
{
    std::istringstream in(line);
    std::vector<std::string> cols;
    std::string col;
    while (in >> col) {
        cols.push_back(col);
    }
    return cols;
}

template <typename T>
bool parse_number(std::string const& text, T& value)
{
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return false;
    }
    if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(value);
    }
    return true;
}

std::size_t relevant_in_top(RankedList const& ranked, Qrels const& qrels, int topic, std::size_t k)
{
    auto const n = std::min(k, ranked.entries.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += qrels.is_relevant(topic, ranked.entries[i].doc_id) ? 1 : 0;
    }
    return hits;
}

}  // namespace

void Qrels::add(int topic, std::string doc_id, int grade)
{
    if (grade < 0) {
        throw Error("negative relevance grade for topic " + std::to_string(topic));
    }
    auto& topic_map = m_judgments[topic];
    if (!topic_map.emplace(std::move(doc_id), grade).second) {
        throw Error("duplicate judgment for topic " + std::to_string(topic));
    }
}

std::optional<int> Qrels::grade(int topic, std::string_view doc_id) const
{
    auto t = m_judgments.find(topic);
    if (t == m_judgments.end()) {
        return std::nullopt;
    }
    auto d = t->second.find(doc_id);
    if (d == t->second.end()) {
        return std::nullopt;
    }
    return d->second;
}

bool Qrels::is_relevant(int topic, std::string_view doc_id) const
{
    auto g = grade(topic, doc_id);
    return g && *g >= 1;
}

std::size_t Qrels::relevant_count(int topic) const
{
    auto t = m_judgments.find(topic);
    if (t == m_judgments.end()) {
        return 0;
    }
    return static_cast<std::size_t>(
        std::count_if(t->second.begin(), t->second.end(), [](auto const& kv) { return kv.second >= 1; }));
}

std::vector<int> Qrels::topics() const
{
    std::vector<int> out;
    for (auto const& [topic, _] : m_judgments) {
        out.push_back(topic);
    }
    return out;
}

std::map<std::string, int, std::less<>> const& Qrels::judgments(int topic) const
{
    static std::map<std::string, int, std::less<>> const empty;
    auto t = m_judgments.find(topic);
    return t == m_judgments.end() ? empty : t->second;
}

std::size_t Qrels::size() const
{
    std::size_t n = 0;
    for (auto const& [_, docs] : m_judgments) {
        n += docs.size();
    }
    return n;
}

Qrels parse_qrels(std::istream& in)
{
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cols = split_ws(line);
        if (cols.empty()) {
            continue;
        }
        int topic = 0;
        int grade = 0;
        if (cols.size() != 4 || !parse_number(cols[0], topic) || !parse_number(cols[3], grade)) {
            throw ParseError("expected 'topic iteration doc_id grade'", lineno);
        }
        try {
            qrels.add(topic, cols[2], grade);
        } catch (Error const& e) {
            throw ParseError(std::string(e.what()) + " (doc " + cols[2] + ")", lineno);
        }
    }
    return qrels;
}

std::string format_run_line(RunEntry const& e)
{
    return std::to_string(e.topic) + " Q0 " + e.doc_id + " " + std::to_string(e.rank) + " " + format_double(e.score) +
           " " + e.tag;
}

void write_run(std::ostream& out, std::span<RunEntry const> entries)
{
    for (auto const& e : entries) {
        out << format_run_line(e) << '\n';
    }
}

std::vector<RunEntry> read_run(std::istream& in)
{
    std::vector<RunEntry> entries;
    std::vector<std::size_t> lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cols = split_ws(line);
        if (cols.empty()) {
            continue;
        }
        RunEntry e;
        if (cols.size() != 6 || !parse_number(cols[0], e.topic) || !parse_number(cols[3], e.rank) ||
            !parse_number(cols[4], e.score)) {
            throw ParseError("expected 'topic Q0 doc_id rank score tag'", lineno);
        }
        e.doc_id = cols[2];
        e.tag = cols[5];
        entries.push_back(std::move(e));
        lines.push_back(lineno);
    }

    struct TopicState {
        std::size_t last_rank = 0;
        double last_score = 0.0;
        std::unordered_set<std::string> docs;
    };
    std::unordered_map<int, TopicState> state;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto const& e = entries[i];
        auto& s = state[e.topic];
        if (e.rank != s.last_rank + 1) {
            throw ParseError("topic " + std::to_string(e.topic) + ": expected rank " + std::to_string(s.last_rank + 1),
                             lines[i]);
        }
        if (s.last_rank > 0 && e.score > s.last_score) {
            throw ParseError("topic " + std::to_string(e.topic) + ": score increases with rank", lines[i]);
        }
        if (!s.docs.insert(e.doc_id).second) {
            throw ParseError("topic " + std::to_string(e.topic) + ": duplicate doc " + e.doc_id, lines[i]);
        }
        s.last_rank = e.rank;
        s.last_score = e.score;
    }
    return entries;
}

std::vector<RunEntry> to_run_entries(std::span<RankedList const> lists, std::string const& tag)
{
    std::vector<RunEntry> out;
    for (auto const& list : lists) {
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            out.push_back({list.topic_number, list.entries[i].doc_id, i + 1, list.entries[i].score, tag});
        }
    }
    return out;
}

std::vector<RankedList> group_run(std::span<RunEntry const> entries)
{
    std::vector<RankedList> lists;
    std::unordered_map<int, std::size_t> slot;
    std::unordered_map<int, std::unordered_set<std::string>> seen;
    for (auto const& e : entries) {
        auto [it, inserted] = slot.emplace(e.topic, lists.size());
        if (inserted) {
            lists.push_back({e.topic, {}});
        }
        auto& list = lists[it->second];
        auto const label = "topic " + std::to_string(e.topic);
        if (e.rank != list.entries.size() + 1) {
            throw Error(label + ": ranks are not contiguous from 1");
        }
        if (!list.entries.empty() && e.score > list.entries.back().score) {
            throw Error(label + ": score increases with rank");
        }
        if (!seen[e.topic].insert(e.doc_id).second) {
            throw Error(label + ": duplicate doc " + e.doc_id);
        }
        list.entries.push_back({e.doc_id, e.score});
    }
    return lists;
}

double precision_at_k(RankedList const& ranked, Qrels const& qrels, int topic, std::size_t k)
{
    if (k == 0) {
        throw Error("precision cutoff must be positive");
    }
    return static_cast<double>(relevant_in_top(ranked, qrels, topic, k)) / static_cast<double>(k);
}

double recall_at_k(RankedList const& ranked, Qrels const& qrels, int topic, std::size_t k)
{
    if (k == 0) {
        throw Error("recall cutoff must be positive");
    }
    auto const total = qrels.relevant_count(topic);
    if (total == 0) {
        return 0.0;
    }
    return static_cast<double>(relevant_in_top(ranked, qrels, topic, k)) / static_cast<double>(total);
}

double r_precision(RankedList const& ranked, Qrels const& qrels, int topic)
{
    auto const r = qrels.relevant_count(topic);
    if (r == 0) {
        return 0.0;
    }
    return static_cast<double>(relevant_in_top(ranked, qrels, topic, r)) / static_cast<double>(r);
}

MetricsReport evaluate_run(std::span<RunEntry const> run, Qrels const& qrels)
{
    MetricsReport report;
    auto const lists = group_run(run);
    std::set<int> present;
    for (auto const& list : lists) {
        TopicMetrics m;
        m.topic = list.topic_number;
        m.p10 = precision_at_k(list, qrels, m.topic, 10);
        m.r1000 = recall_at_k(list, qrels, m.topic, 1000);
        m.r_prec = r_precision(list, qrels, m.topic);
        m.retrieved = list.entries.size();
        m.relevant = qrels.relevant_count(m.topic);
        m.relevant_retrieved = relevant_in_top(list, qrels, m.topic, list.entries.size());
        for (auto const& e : list.entries) {
            if (qrels.grade(m.topic, e.doc_id)) {
                ++m.judged_retrieved;
            } else {
                ++m.unjudged_retrieved;
            }
        }
        report.topics.push_back(m);
        present.insert(m.topic);
    }
    if (!report.topics.empty()) {
        auto const n = static_cast<double>(report.topics.size());
        for (auto const& m : report.topics) {
            report.mean_p10 += m.p10;
            report.mean_r1000 += m.r1000;
            report.mean_r_prec += m.r_prec;
        }
        report.mean_p10 /= n;
        report.mean_r1000 /= n;
        report.mean_r_prec /= n;
    }
    for (int topic : qrels.topics()) {
        if (!present.contains(topic)) {
            report.missing_topics.push_back(topic);
        }
    }
    return report;
}

std::string MetricsReport::to_text() const
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %8s %8s %8s %9s %9s\n", "topic", "R@1000", "P@10", "R-prec", "retrieved",
                  "relevant");
    out += buf;
    for (auto const& m : topics) {
        std::snprintf(buf, sizeof buf, "%-8d %8.4f %8.4f %8.4f %9zu %9zu\n", m.topic, m.r1000, m.p10, m.r_prec,
                      m.retrieved, m.relevant);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-8s %8.4f %8.4f %8.4f\n", "all", mean_r1000, mean_p10, mean_r_prec);
    out += buf;
    for (int t : missing_topics) {
        out += "warning: topic " + std::to_string(t) + " is judged but absent from the run\n";
    }
    return out;
}

std::string MetricsReport::to_json() const
{
    nlohmann::ordered_json obj;
    obj["mean"] = {{"P@10", mean_p10}, {"R@1000", mean_r1000}, {"R-prec", mean_r_prec}};
    auto& per_topic = obj["topics"] = nlohmann::ordered_json::array();
    for (auto const& m : topics) {
        per_topic.push_back({{"topic", m.topic},
                             {"P@10", m.p10},
                             {"R@1000", m.r1000},
                             {"R-prec", m.r_prec},
                             {"retrieved", m.retrieved},
                             {"relevant", m.relevant},
                             {"relevant_retrieved", m.relevant_retrieved},
                             {"judged_retrieved", m.judged_retrieved},
                             {"unjudged_retrieved", m.unjudged_retrieved}});
    }
    obj["missing_topics"] = missing_topics;
    return obj.dump(2) + "\n";
}

MetricsReport MetricsReport::from_json(std::string const& text)
{
    MetricsReport r;
    try {
        auto obj = nlohmann::json::parse(text);
        r.mean_p10 = obj.at("mean").at("P@10").get<double>();
        r.mean_r1000 = obj.at("mean").at("R@1000").get<double>();
        r.mean_r_prec = obj.at("mean").at("R-prec").get<double>();
        for (auto const& t : obj.at("topics")) {
            TopicMetrics m;
            m.topic = t.at("topic").get<int>();
            m.p10 = t.at("P@10").get<double>();
            m.r1000 = t.at("R@1000").get<double>();
            m.r_prec = t.at("R-prec").get<double>();
            m.retrieved = t.at("retrieved").get<std::size_t>();
            m.relevant = t.at("relevant").get<std::size_t>();
            m.relevant_retrieved = t.at("relevant_retrieved").get<std::size_t>();
            m.judged_retrieved = t.at("judged_retrieved").get<std::size_t>();
            m.unjudged_retrieved = t.at("unjudged_retrieved").get<std::size_t>();
            r.topics.push_back(m);
        }
        r.missing_topics = obj.at("missing_topics").get<std::vector<int>>();
    } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("bad metrics report: ") + e.what());
    }
    return r;
}

}  // namespace pmsearch
