#include "pmsearch/expand.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

namespace pmsearch {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string collapse_spaces(std::string_view text)
{
    std::string out;
    bool pending = false;
    for (char c : text) {
        if (is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) {
            out += ' ';
            pending = false;
        }
        out += c;
    }
    return out;
}

// Keeps the first occurrence of every surface (case-insensitive); `seen` is shared
// across the lists of one entry.
void dedupe_into(std::vector<std::string>& list, std::set<std::string>& seen)
{
    std::vector<std::string> kept;
    for (auto& s : list) {
        auto t = trim(s);
        if (t.empty()) {
            continue;
        }
        if (seen.insert(to_lower_ascii(t)).second) {
            kept.push_back(std::move(t));
        }
    }
    list = std::move(kept);
}

std::vector<std::string> json_strings(nlohmann::json const& obj, char const* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return {};
    }
    return it->get<std::vector<std::string>>();
}

}  // namespace

std::string_view to_string(ClauseOrigin origin)
{
    switch (origin) {
    case ClauseOrigin::disease_original: return "disease_original";
    case ClauseOrigin::disease_preferred: return "disease_preferred";
    case ClauseOrigin::disease_synonym: return "disease_synonym";
    case ClauseOrigin::disease_acronym: return "disease_acronym";
    case ClauseOrigin::gene_original: return "gene_original";
    case ClauseOrigin::gene_alias: return "gene_alias";
    }
    return "unknown";
}

bool is_disease_origin(ClauseOrigin origin)
{
    return origin == ClauseOrigin::disease_original || origin == ClauseOrigin::disease_preferred ||
           origin == ClauseOrigin::disease_synonym || origin == ClauseOrigin::disease_acronym;
}

void DiseaseKb::add(DiseaseEntry entry)
{
    entry.canonical = trim(entry.canonical);
    if (entry.canonical.empty()) {
        throw Error("disease entry has an empty canonical name");
    }
    auto key = to_lower_ascii(entry.canonical);
    if (m_entries.contains(key)) {
        throw Error("duplicate disease '" + entry.canonical + "'");
    }
    std::set<std::string> seen{key};
    entry.preferred = trim(entry.preferred);
    if (!entry.preferred.empty() && !seen.insert(to_lower_ascii(entry.preferred)).second) {
        entry.preferred.clear();
    }
    dedupe_into(entry.synonyms, seen);
    dedupe_into(entry.acronyms, seen);
    m_entries.emplace(std::move(key), std::move(entry));
}

DiseaseEntry const* DiseaseKb::find(std::string_view disease) const
{
    auto it = m_entries.find(to_lower_ascii(trim(disease)));
    return it == m_entries.end() ? nullptr : &it->second;
}

void GeneTable::add(GeneEntry entry)
{
    entry.symbol = trim(entry.symbol);
    if (entry.symbol.empty()) {
        throw Error("gene entry has an empty symbol");
    }
    auto key = to_lower_ascii(entry.symbol);
    auto it = m_entries.find(key);
    if (it == m_entries.end()) {
        it = m_entries.emplace(key, GeneEntry{entry.symbol, {}}).first;
    }
    auto& aliases = it->second.aliases;
    for (auto& alias : entry.aliases) {
        auto a = trim(alias);
        if (!a.empty() && std::find(aliases.begin(), aliases.end(), a) == aliases.end()) {
            aliases.push_back(std::move(a));
        }
    }
}

GeneEntry const* GeneTable::find(std::string_view symbol) const
{
    auto it = m_entries.find(to_lower_ascii(trim(symbol)));
    return it == m_entries.end() ? nullptr : &it->second;
}

DiseaseKb load_disease_kb(std::istream& in)
{
    DiseaseKb kb;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        DiseaseEntry entry;
        try {
            auto obj = nlohmann::json::parse(line);
            if (!obj.is_object()) {
                throw ParseError("disease entry is not a JSON object", lineno);
            }
            entry.canonical = obj.at("canonical").get<std::string>();
            entry.preferred = obj.value("preferred", std::string{});
            entry.synonyms = json_strings(obj, "synonyms");
            entry.acronyms = json_strings(obj, "acronyms");
        } catch (nlohmann::json::exception const& e) {
            throw ParseError(std::string("malformed disease entry: ") + e.what(), lineno);
        }
        try {
            kb.add(std::move(entry));
        } catch (ParseError const&) {
            throw;
        } catch (Error const& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return kb;
}

GeneTable load_gene_aliases(std::istream& in)
{
    GeneTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw ParseError("gene row needs exactly two tab-separated columns", lineno);
        }
        GeneEntry entry{trim(line.substr(0, tab)), {}};
        if (entry.symbol.empty()) {
            throw ParseError("gene row has an empty symbol", lineno);
        }
        auto aliases = trim(line.substr(tab + 1));
        if (aliases != "-") {
            std::istringstream parts(aliases);
            std::string alias;
            while (std::getline(parts, alias, '|')) {
                entry.aliases.push_back(alias);
            }
        }
        table.add(std::move(entry));
    }
    return table;
}

void count_acronyms(std::string_view text, std::string_view disease_lower, std::map<std::string, std::size_t>& counts)
{
    if (disease_lower.empty() || text.size() < disease_lower.size()) {
        return;
    }
    auto const lower = to_lower_ascii(text);
    for (auto pos = lower.find(disease_lower); pos != std::string::npos; pos = lower.find(disease_lower, pos + 1)) {
        auto i = pos + disease_lower.size();
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        if (i >= text.size() || text[i] != '(') {
            continue;
        }
        auto const start = ++i;
        while (i < text.size() && text[i] >= 'A' && text[i] <= 'Z') {
            ++i;
        }
        auto const len = i - start;
        if (i < text.size() && text[i] == ')' && len >= 2 && len <= 10) {
            ++counts[std::string(text.substr(start, len))];
        }
    }
}

std::vector<AcronymCount> mine_acronyms(CorpusStore const& store, std::string_view disease)
{
    auto const needle = to_lower_ascii(trim(disease));
    if (needle.empty()) {
        throw Error("cannot mine acronyms for an empty disease name");
    }
    std::map<std::string, std::size_t> counts;
    for (auto const& doc : store.documents()) {
        count_acronyms(doc.title, needle, counts);
        count_acronyms(doc.abstract, needle, counts);
    }
    std::vector<AcronymCount> out;
    out.reserve(counts.size());
    for (auto& [acronym, count] : counts) {
        out.push_back({acronym, count});
    }
    std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) { return a.count > b.count; });
    return out;
}

double ExpansionWeights::for_origin(ClauseOrigin origin) const
{
    switch (origin) {
    case ClauseOrigin::disease_original: return disease_original;
    case ClauseOrigin::disease_preferred: return disease_preferred;
    case ClauseOrigin::disease_synonym: return disease_synonym;
    case ClauseOrigin::disease_acronym: return disease_acronym;
    case ClauseOrigin::gene_original: return gene_original;
    case ClauseOrigin::gene_alias: return gene_alias;
    }
    return 0.0;
}

void ExpansionWeights::validate() const
{
    for (double w : {disease_original, disease_preferred, disease_synonym, disease_acronym, gene_original, gene_alias}) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw Error("expansion weights must lie in [0, 1]");
        }
    }
}

std::vector<std::string> split_gene_field(std::string_view gene)
{
    // Commas and the standalone word "and" separate genes.
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        parts.push_back(current);
        current.clear();
    };
    for (std::size_t i = 0; i < gene.size(); ++i) {
        if (gene[i] == ',') {
            flush();
            continue;
        }
        bool const word_start = i == 0 || is_space(gene[i - 1]);
        if (word_start && i + 3 <= gene.size() && to_lower_ascii(gene.substr(i, 3)) == "and" &&
            (i + 3 == gene.size() || is_space(gene[i + 3]))) {
            flush();
            i += 2;
            continue;
        }
        current += gene[i];
    }
    flush();

    std::vector<std::string> terms;
    for (auto const& part : parts) {
        std::string base;
        std::vector<std::string> variants;
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (part[i] == '(') {
                auto close = part.find(')', i + 1);
                auto inner = part.substr(i + 1, close == std::string::npos ? std::string::npos : close - i - 1);
                if (auto v = collapse_spaces(inner); !v.empty()) {
                    variants.push_back(std::move(v));
                }
                if (close == std::string::npos) {
                    break;
                }
                i = close;
                base += ' ';
                continue;
            }
            base += part[i];
        }
        if (auto b = collapse_spaces(base); !b.empty()) {
            terms.push_back(std::move(b));
        }
        for (auto& v : variants) {
            terms.push_back(std::move(v));
        }
    }
    return terms;
}

ExpandedQuery expand_topic(Topic const& topic, DiseaseKb const& diseases, GeneTable const& genes,
                           std::span<AcronymCount const> mined, ExpansionWeights const& weights, ExpansionMode mode)
{
    weights.validate();
    auto const disease = collapse_spaces(topic.disease);
    if (disease.empty()) {
        throw Error("topic " + std::to_string(topic.number) + " has an empty disease");
    }
    auto const gene_terms = split_gene_field(topic.gene);
    if (gene_terms.empty()) {
        throw Error("topic " + std::to_string(topic.number) + ": gene field '" + topic.gene + "' names no gene");
    }

    std::vector<WeightedClause> candidates;
    auto push = [&](std::string_view surface, ClauseOrigin origin) {
        auto s = collapse_spaces(surface);
        if (!s.empty()) {
            candidates.push_back({std::move(s), weights.for_origin(origin), origin});
        }
    };

    push(disease, ClauseOrigin::disease_original);
    if (auto const* entry = diseases.find(disease)) {
        if (mode.knowledge_base) {
            push(entry->preferred, ClauseOrigin::disease_preferred);
            for (auto const& s : entry->synonyms) {
                push(s, ClauseOrigin::disease_synonym);
            }
        }
        if (mode.acronyms) {
            for (auto const& a : entry->acronyms) {
                push(a, ClauseOrigin::disease_acronym);
            }
        }
    }
    if (mode.acronyms && !mined.empty()) {
        push(mined.front().acronym, ClauseOrigin::disease_acronym);
    }

    for (auto const& term : gene_terms) {
        push(term, ClauseOrigin::gene_original);
    }
    if (mode.knowledge_base) {
        for (auto const& term : gene_terms) {
            auto const* entry = genes.find(term);
            if (entry == nullptr) {
                // "ERBB2 amplification" falls back to its leading symbol.
                auto space = term.find(' ');
                if (space != std::string::npos) {
                    entry = genes.find(term.substr(0, space));
                }
            }
            if (entry != nullptr) {
                for (auto const& alias : entry->aliases) {
                    push(alias, ClauseOrigin::gene_alias);
                }
            }
        }
    }

    ExpandedQuery query;
    query.topic_number = topic.number;
    std::unordered_map<std::string, std::size_t> position;
    std::set<std::string> disease_seen;
    for (auto& c : candidates) {
        auto key = to_lower_ascii(c.surface);
        if (is_disease_origin(c.origin) && disease_seen.insert(key).second) {
            query.disease_surfaces.push_back(c.surface);
        }
        auto [it, inserted] = position.emplace(key, query.clauses.size());
        if (inserted) {
            query.clauses.push_back(std::move(c));
        } else if (c.weight > query.clauses[it->second].weight) {
            query.clauses[it->second] = std::move(c);
        }
    }
    return query;
}

}  // namespace pmsearch
