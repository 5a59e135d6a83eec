#include "sqlaudit/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace sqlaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string require_string(const json& obj, const std::string& key,
                           const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw ManifestError("manifest: missing or non-string field " + path + "." +
                        key);
  return it->get<std::string>();
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") +
                        e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest: root must be an object");

  DatasetManifest m;
  m.name = require_string(doc, "name", "$");

  auto dbs = doc.find("databases");
  if (dbs == doc.end() || !dbs->is_array())
    throw ManifestError("manifest: missing array field $.databases");
  for (size_t i = 0; i < dbs->size(); ++i) {
    const json& entry = (*dbs)[i];
    std::string where = "$.databases[" + std::to_string(i) + "]";
    if (!entry.is_object())
      throw ManifestError("manifest: " + where + " must be an object");
    ManifestDatabase db;
    db.name = require_string(entry, "name", where);
    db.dump_path = require_string(entry, "dump", where);
    m.databases.push_back(std::move(db));
  }

  auto queries = doc.find("queries");
  if (queries == doc.end() || !queries->is_array())
    throw ManifestError("manifest: missing array field $.queries");
  for (size_t i = 0; i < queries->size(); ++i) {
    const json& entry = (*queries)[i];
    std::string where = "$.queries[" + std::to_string(i) + "]";
    if (!entry.is_object())
      throw ManifestError("manifest: " + where + " must be an object");
    QueryRecord rec;
    rec.nl_question = require_string(entry, "question", where);
    rec.gold_sql = require_string(entry, "sql", where);
    rec.database_name = require_string(entry, "database", where);
    bool declared = false;
    if (auto it = entry.find("hardness"); it != entry.end()) {
      if (!it->is_string())
        throw ManifestError("manifest: " + where + ".hardness must be a string");
      auto level = hardness_from_name(it->get<std::string>());
      if (!level)
        throw ManifestError("manifest: " + where + ".hardness has unknown level '" +
                            it->get<std::string>() + "'");
      rec.hardness = *level;
      declared = true;
    }
    m.queries.push_back(std::move(rec));
    m.hardness_declared.push_back(declared);
  }
  return m;
}

LoadedDataset load_dataset(const std::string& manifest_path) {
  DatasetManifest m = load_manifest(manifest_path);
  fs::path base = fs::path(manifest_path).parent_path();

  LoadedDataset out;
  out.name = m.name;
  if (m.queries.empty())
    out.warnings.push_back("manifest declares zero queries");

  for (const auto& entry : m.databases) {
    fs::path dump_path = base / entry.dump_path;
    std::ifstream in(dump_path);
    if (!in)
      throw ManifestError("cannot open dump for database '" + entry.name +
                          "': " + dump_path.string());
    std::string sql((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    Database db;
    try {
      db = parse_dump(sql, &out.warnings);
    } catch (const ParseError& e) {
      throw ManifestError("dump for database '" + entry.name +
                          "' does not parse: " + e.what());
    }
    db.name = entry.name;
    for (const auto& existing : out.databases)
      if (iequal(existing.name, db.name))
        throw ManifestError("duplicate database name '" + entry.name + "'");
    out.databases.push_back(std::move(db));
  }

  for (size_t i = 0; i < m.queries.size(); ++i) {
    QueryRecord rec = m.queries[i];
    std::string where = "$.queries[" + std::to_string(i) + "]";
    const Database* db = nullptr;
    for (const auto& d : out.databases)
      if (iequal(d.name, rec.database_name)) db = &d;
    if (!db)
      throw ManifestError("manifest: " + where + " references unknown database '" +
                          rec.database_name + "'");
    HardnessLevel computed;
    try {
      computed = classify_query(rec.gold_sql, db);
    } catch (const ParseError& e) {
      throw ManifestError("manifest: " + where + " gold SQL does not parse: " +
                          e.what());
    }
    if (m.hardness_declared[i] && rec.hardness != computed)
      out.warnings.push_back(
          where + ": declared hardness " +
          std::string(hardness_name(rec.hardness)) + " but computed " +
          std::string(hardness_name(computed)));
    rec.hardness = computed;
    out.queries.push_back(std::move(rec));
  }
  return out;
}

}  // namespace sqlaudit
