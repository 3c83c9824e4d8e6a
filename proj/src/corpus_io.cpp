#include "ncall/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ncall {

namespace {

using json = nlohmann::ordered_json;

Vector parse_dist(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    fail(Errc::SchemaError, where + ": \"dist\" must be a nonempty array of numbers");
  }
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& e : arr) {
    if (!e.is_number()) {
      fail(Errc::SchemaError, where + ": \"dist\" entry " + std::to_string(i) + " is not a number");
    }
    v[i++] = e.get<double>();
  }
  return v;
}

SubtopicDistribution validated_dist(const json& arr, const std::string& where) {
  Vector v = parse_dist(arr, where);
  try {
    return SubtopicDistribution::validated(std::move(v));
  } catch (const Error& e) {
    fail(Errc::ValidationError, where + ": " + e.what(), e.detail());
  }
}

json dist_to_json(const SubtopicDistribution& d) {
  json arr = json::array();
  for (Index i = 0; i < d.size(); ++i) arr.push_back(d[i]);
  return arr;
}

}  // namespace

std::pair<Corpus, Query> parse_corpus(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    fail(Errc::SchemaError, "top level must be an object");
  }
  for (const char* key : {"subtopics", "query", "documents"}) {
    if (!root.contains(key)) {
      fail(Errc::SchemaError, std::string("missing \"") + key + "\" field");
    }
  }

  const json& subs = root["subtopics"];
  if (!subs.is_array() || subs.empty()) {
    fail(Errc::SchemaError, "\"subtopics\" must be a nonempty array of labels");
  }
  std::vector<std::string> labels;
  labels.reserve(subs.size());
  for (const auto& s : subs) {
    if (!s.is_string()) {
      fail(Errc::SchemaError, "\"subtopics\" entries must be strings");
    }
    labels.push_back(s.get<std::string>());
  }
  const Index dim = static_cast<Index>(labels.size());

  const json& q = root["query"];
  if (!q.is_object() || !q.contains("id") || !q.contains("dist") || !q["id"].is_string()) {
    fail(Errc::SchemaError, "\"query\" must be an object with \"id\" and \"dist\"");
  }
  SubtopicDistribution qdist = validated_dist(q["dist"], "query");
  if (qdist.size() != dim) {
    fail(Errc::SchemaError, "query dimension " + std::to_string(qdist.size()) +
                                " does not match subtopic count " + std::to_string(dim));
  }
  Query query{q["id"].get<std::string>(), std::move(qdist)};

  const json& docs = root["documents"];
  if (!docs.is_array()) {
    fail(Errc::SchemaError, "\"documents\" must be an array");
  }
  std::vector<Document> documents;
  documents.reserve(docs.size());
  std::size_t pos = 0;
  for (const auto& d : docs) {
    const std::string where = "document " + std::to_string(pos);
    if (!d.is_object() || !d.contains("id") || !d.contains("dist") || !d["id"].is_string()) {
      fail(Errc::SchemaError, where + " must be an object with \"id\" and \"dist\"");
    }
    const std::string id = d["id"].get<std::string>();
    SubtopicDistribution dist = validated_dist(d["dist"], "document '" + id + "'");
    if (dist.size() != dim) {
      fail(Errc::SchemaError, "document '" + id + "' dimension " + std::to_string(dist.size()) +
                                  " does not match subtopic count " + std::to_string(dim));
    }
    documents.push_back(Document{id, std::move(dist)});
    ++pos;
  }

  try {
    return {Corpus(std::move(labels), std::move(documents)), std::move(query)};
  } catch (const Error& e) {
    if (e.code() == Errc::DimensionMismatch) {
      fail(Errc::SchemaError, e.what());
    }
    throw;  // ValidationError: duplicate/empty ids
  }
}

std::string serialize_corpus(const Corpus& corpus, const Query& query) {
  json root = json::object();
  root["subtopics"] = corpus.subtopic_labels();
  root["query"] = {{"id", query.id}, {"dist", dist_to_json(query.dist)}};
  json docs = json::array();
  for (const Document& d : corpus.documents()) {
    docs.push_back({{"id", d.id}, {"dist", dist_to_json(d.dist)}});
  }
  root["documents"] = std::move(docs);
  return root.dump(2) + "\n";
}

std::pair<Corpus, Query> load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::IoError, "cannot open corpus file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

}  // namespace ncall
