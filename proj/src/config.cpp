#include "pmsearch/config.hpp"

#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

namespace pmsearch {

namespace pt = boost::property_tree;

namespace {

std::filesystem::path resolve(pt::ptree const& tree, char const* key, std::filesystem::path const& base)
{
    auto value = trim(tree.get<std::string>(std::string("paths.") + key, ""));
    if (value.empty()) {
        return {};
    }
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

template <typename T>
T get(pt::ptree const& tree, std::string const& key, T fallback)
{
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (trim(tree.get<std::string>(key, "")).starts_with('-')) {
            throw ParseError("config value '" + key + "' must not be negative");
        }
    }
    auto const child = tree.get_child_optional(key);
    if (!child) {
        return fallback;
    }
    try {
        return child->template get_value<T>();
    } catch (pt::ptree_bad_data const&) {
        throw ParseError("config value '" + key + "' has the wrong type");
    }
}

}  // namespace

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::baseline: return "baseline";
    case Strategy::expand: return "expand";
    case Strategy::expand_acronym: return "expand+acronym";
    case Strategy::heuristic: return "heuristic";
    case Strategy::full: return "full";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name)
{
    for (auto s : {Strategy::baseline, Strategy::expand, Strategy::expand_acronym, Strategy::heuristic, Strategy::full}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw Error("unknown strategy '" + std::string(name) + "'");
}

void PipelineConfig::validate() const
{
    bm25.validate();
    weights.validate();
    rerank.validate();
    if (depth == 0) {
        throw Error("retrieval depth must be positive");
    }
    if (!(train.lambda >= 0.0) || !(train.tolerance > 0.0) || train.max_iterations == 0) {
        throw Error("training options out of range");
    }
}

PipelineConfig parse_config(std::string const& text, std::filesystem::path const& base_dir)
{
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (pt::ini_parser_error const& e) {
        throw ParseError("bad config: " + e.message(), e.line());
    }

    PipelineConfig c;
    c.paths.corpus = resolve(tree, "corpus", base_dir);
    c.paths.topics = resolve(tree, "topics", base_dir);
    c.paths.disease_kb = resolve(tree, "disease_kb", base_dir);
    c.paths.gene_table = resolve(tree, "gene_table", base_dir);
    c.paths.qrels = resolve(tree, "qrels", base_dir);
    c.paths.train_topics = resolve(tree, "train_topics", base_dir);
    c.paths.train_qrels = resolve(tree, "train_qrels", base_dir);
    c.paths.index_dir = resolve(tree, "index_dir", base_dir);
    c.paths.model = resolve(tree, "model", base_dir);
    c.paths.keywords = resolve(tree, "keywords", base_dir);
    c.paths.run = resolve(tree, "run", base_dir);

    c.bm25.k1 = get(tree, "bm25.k1", c.bm25.k1);
    c.bm25.b = get(tree, "bm25.b", c.bm25.b);
    c.bm25.clamp_idf = get(tree, "bm25.clamp_idf", c.bm25.clamp_idf);
    c.remove_stopwords = get(tree, "bm25.stopwords", c.remove_stopwords);

    c.weights.disease_original = get(tree, "expansion.disease_original", c.weights.disease_original);
    c.weights.disease_preferred = get(tree, "expansion.disease_preferred", c.weights.disease_preferred);
    c.weights.disease_synonym = get(tree, "expansion.disease_synonym", c.weights.disease_synonym);
    c.weights.disease_acronym = get(tree, "expansion.disease_acronym", c.weights.disease_acronym);
    c.weights.gene_original = get(tree, "expansion.gene_original", c.weights.gene_original);
    c.weights.gene_alias = get(tree, "expansion.gene_alias", c.weights.gene_alias);

    c.rerank.penalty_factor = get(tree, "rerank.penalty_factor", c.rerank.penalty_factor);
    c.rerank.top_k = get(tree, "rerank.top_k", c.rerank.top_k);
    auto const match = get<std::string>(tree, "rerank.title_match", "all");
    if (match == "all") {
        c.rerank.title_match = TitleMatch::all_surfaces;
    } else if (match == "original") {
        c.rerank.title_match = TitleMatch::original_only;
    } else {
        throw ParseError("rerank.title_match must be 'all' or 'original'");
    }

    c.train.lambda = get(tree, "train.lambda", c.train.lambda);
    c.train.tolerance = get(tree, "train.tolerance", c.train.tolerance);
    c.train.max_iterations = get(tree, "train.max_iterations", c.train.max_iterations);
    c.train.standardize = get(tree, "train.standardize", c.train.standardize);
    c.seed = get(tree, "train.seed", c.seed);

    c.depth = get(tree, "run.depth", c.depth);
    c.strategy = parse_strategy(get<std::string>(tree, "run.strategy", std::string(to_string(c.strategy))));
    c.run_tag = get<std::string>(tree, "run.tag", c.run_tag);
    if (c.run_tag.empty() || c.run_tag.find_first_of(" \t") != std::string::npos) {
        throw ParseError("run.tag must be a single non-empty word");
    }

    c.validate();
    return c;
}

PipelineConfig load_config(std::filesystem::path const& file)
{
    return parse_config(read_file(file), file.parent_path());
}

}  // namespace pmsearch
