#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sqlaudit/hardness.hpp"
#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ManifestDatabase {
  std::string name;
  std::string dump_path;  // relative to the manifest file
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestDatabase> databases;
  std::vector<QueryRecord> queries;  // hardness filled from "hardness" field
  std::vector<bool> hardness_declared;  // aligned with queries
};

// Parses manifest.json. Validation is structural only (required fields,
// level names); gold SQL and database references are checked by
// load_dataset. Errors carry the offending field path.
DatasetManifest load_manifest(const std::string& path);

struct LoadedDataset {
  std::string name;
  std::vector<Database> databases;
  std::vector<QueryRecord> queries;  // hardness recomputed from gold SQL
  std::vector<std::string> warnings;
};

// Loads and parses every dump, checks that each query's database resolves
// and its gold SQL parses, computes hardness, and records a warning for
// every declared-vs-computed hardness mismatch.
LoadedDataset load_dataset(const std::string& manifest_path);

}  // namespace sqlaudit
