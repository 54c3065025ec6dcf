#include "pmsearch/features.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"
#include "pmsearch/tokenizer.hpp"

namespace pmsearch {

namespace {

std::vector<std::string> normalized(std::vector<std::string> list)
{
    for (auto& s : list) {
        s = to_lower_ascii(trim(s));
    }
    std::erase_if(list, [](auto const& s) { return s.empty(); });
    return list;
}

// Occurrences of each keyword's token run in `tokens`, summed.
double count_keywords(std::span<std::string const> tokens, std::vector<std::vector<std::string>> const& keywords)
{
    std::size_t total = 0;
    for (auto const& kw : keywords) {
        if (kw.empty() || kw.size() > tokens.size()) {
            continue;
        }
        for (std::size_t i = 0; i + kw.size() <= tokens.size(); ++i) {
            if (std::equal(kw.begin(), kw.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                ++total;
            }
        }
    }
    return static_cast<double>(total);
}

std::vector<std::vector<std::string>> tokenized(std::vector<std::string> const& list)
{
    std::vector<std::vector<std::string>> out;
    out.reserve(list.size());
    for (auto const& s : list) {
        out.push_back(tokenize(s));
    }
    return out;
}

}  // namespace

KeywordLists KeywordLists::defaults()
{
    return {
        {"treatment", "survival", "prognostic", "clinical", "prognosis", "therapy", "outcome", "resistance", "targets",
         "therapeutic", "immunotherapy"},
        {"pathogenesis", "tumor", "development", "model", "tissue", "mouse", "specific", "staining", "dna", "case",
         "combinations"},
        {"humans", "mutation", "genetics", "drug therapy", "metabolism", "drug therapy", "pharmacology",
         "antagonists & inhibitors", "drug effects", "therapeutic use", "immunology"},
    };
}

KeywordLists KeywordLists::from_json(std::string const& text)
{
    auto lists = defaults();
    try {
        auto obj = nlohmann::json::parse(text);
        if (!obj.is_object()) {
            throw ParseError("keyword file must hold a JSON object");
        }
        if (obj.contains("positive")) {
            lists.positive = normalized(obj["positive"].get<std::vector<std::string>>());
        }
        if (obj.contains("negative")) {
            lists.negative = normalized(obj["negative"].get<std::vector<std::string>>());
        }
        if (obj.contains("heading")) {
            lists.heading = normalized(obj["heading"].get<std::vector<std::string>>());
        }
    } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("bad keyword file: ") + e.what());
    }
    return lists;
}

std::string KeywordLists::to_json() const
{
    nlohmann::ordered_json obj;
    obj["positive"] = positive;
    obj["negative"] = negative;
    obj["heading"] = heading;
    return obj.dump(2);
}

std::array<std::string_view, kFeatureCount> feature_names()
{
    return {"disease_in_title", "pos_in_title",      "pos_in_abstract", "neg_in_title",
            "neg_in_abstract",  "is_clinical_trial", "heading_hits"};
}

bool title_mentions_disease(std::string_view title, std::span<std::string const> disease_surfaces)
{
    auto const title_tokens = tokenize(title);
    for (auto const& surface : disease_surfaces) {
        if (contains_sequence(title_tokens, tokenize(surface))) {
            return true;
        }
    }
    return false;
}

FeatureVector extract_features(DocumentRecord const& doc, std::span<std::string const> disease_surfaces,
                               KeywordLists const& keywords)
{
    auto const positive = tokenized(keywords.positive);
    auto const negative = tokenized(keywords.negative);
    auto const title = tokenize(doc.title);
    auto const abstract = tokenize(doc.abstract);

    FeatureVector f;
    for (auto const& surface : disease_surfaces) {
        if (contains_sequence(title, tokenize(surface))) {
            f.disease_in_title = 1;
            break;
        }
    }
    f.pos_in_title = count_keywords(title, positive);
    f.pos_in_abstract = count_keywords(abstract, positive);
    f.neg_in_title = count_keywords(title, negative);
    f.neg_in_abstract = count_keywords(abstract, negative);

    for (auto const& type : doc.pub_types) {
        if (to_lower_ascii(type).find("clinical trial") != std::string::npos) {
            f.is_clinical_trial = 1;
            break;
        }
    }

    // Each distinct heading phrase counts once if any MeSH heading contains it.
    std::vector<std::string> headings;
    headings.reserve(doc.mesh.size());
    for (auto const& h : doc.mesh) {
        headings.push_back(to_lower_ascii(h));
    }
    std::set<std::string> phrases;
    for (auto const& p : keywords.heading) {
        phrases.insert(to_lower_ascii(p));
    }
    for (auto const& phrase : phrases) {
        if (std::any_of(headings.begin(), headings.end(),
                        [&](auto const& h) { return h.find(phrase) != std::string::npos; })) {
            f.heading_hits += 1;
        }
    }
    return f;
}

}  // namespace pmsearch
