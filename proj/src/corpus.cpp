#include "pmsearch/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "pmsearch/error.hpp"
#include "pmsearch/file_util.hpp"

namespace pmsearch {

namespace {

std::vector<std::string> string_array(nlohmann::json const& obj, char const* key)
{
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return out;
    }
    if (!it->is_array()) {
        throw Error(std::string("field '") + key + "' must be an array");
    }
    for (auto const& v : *it) {
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string string_field(nlohmann::json const& obj, char const* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return {};
    }
    return it->get<std::string>();
}

}  // namespace

bool CorpusStore::add(DocumentRecord record)
{
    ++m_seen;
    if (record.id.empty()) {
        reject(m_seen, "record has no id");
        return false;
    }
    if (m_by_id.contains(record.id)) {
        ++m_discarded;
        return false;
    }
    m_by_id.emplace(record.id, m_docs.size());
    m_docs.push_back(std::move(record));
    return true;
}

void CorpusStore::reject(std::size_t record, std::string message)
{
    m_seen = std::max(m_seen, record);
    m_errors.push_back({record, std::move(message)});
}

DocumentRecord const* CorpusStore::find(std::string_view id) const
{
    auto it = m_by_id.find(std::string(id));
    return it == m_by_id.end() ? nullptr : &m_docs[it->second];
}

CorpusStore ingest_documents(std::span<DocumentRecord const> records)
{
    CorpusStore store;
    for (auto const& record : records) {
        store.add(record);
    }
    return store;
}

CorpusStore read_documents(std::istream& in)
{
    CorpusStore store;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        DocumentRecord doc;
        try {
            auto obj = nlohmann::json::parse(line);
            if (!obj.is_object()) {
                throw Error("record is not a JSON object");
            }
            doc.id = string_field(obj, "id");
            doc.title = string_field(obj, "title");
            doc.abstract = string_field(obj, "abstract");
            doc.pub_types = string_array(obj, "pub_types");
            doc.mesh = string_array(obj, "mesh");
        } catch (std::exception const& e) {
            store.reject(lineno, e.what());
            continue;
        }
        if (doc.id.empty()) {
            store.reject(lineno, "record has no id");
            continue;
        }
        store.add(std::move(doc));
    }
    return store;
}

std::string document_to_json(DocumentRecord const& doc)
{
    nlohmann::ordered_json obj;
    obj["id"] = doc.id;
    obj["title"] = doc.title;
    obj["abstract"] = doc.abstract;
    obj["pub_types"] = doc.pub_types;
    obj["mesh"] = doc.mesh;
    return obj.dump();
}

std::vector<Topic> parse_topics(std::string const& xml)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(xml);
    try {
        pt::read_xml(in, tree);
    } catch (pt::xml_parser_error const& e) {
        throw ParseError("malformed topic XML: " + e.message(), e.line());
    }

    auto root = tree.get_child_optional("topics");
    if (!root) {
        throw ParseError("topic file has no <topics> root");
    }

    std::vector<Topic> topics;
    std::set<int> seen;
    for (auto const& [name, node] : *root) {
        if (name != "topic") {
            continue;
        }
        auto number_text = node.get_optional<std::string>("<xmlattr>.number");
        if (!number_text) {
            throw ParseError("topic #" + std::to_string(topics.size() + 1) + " has no number attribute");
        }
        Topic topic;
        try {
            std::size_t used = 0;
            topic.number = std::stoi(trim(*number_text), &used);
            if (used != trim(*number_text).size() || topic.number <= 0) {
                throw std::invalid_argument("not a positive integer");
            }
        } catch (std::exception const&) {
            throw ParseError("topic number '" + *number_text + "' is not a positive integer");
        }
        auto const label = "topic " + std::to_string(topic.number);
        auto disease = node.get_optional<std::string>("disease");
        auto gene = node.get_optional<std::string>("gene");
        if (!disease || trim(*disease).empty()) {
            throw ParseError(label + " has no disease");
        }
        if (!gene || trim(*gene).empty()) {
            throw ParseError(label + " has no gene");
        }
        topic.disease = trim(*disease);
        topic.gene = trim(*gene);
        topic.demographic = trim(node.get<std::string>("demographic", ""));
        if (!seen.insert(topic.number).second) {
            throw ParseError("duplicate " + label);
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

DocumentRecord const* get_document(CorpusStore const& store, std::string_view id)
{
    return store.find(id);
}

}  // namespace pmsearch
