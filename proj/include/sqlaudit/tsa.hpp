#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqlaudit/hardness.hpp"
#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

struct DatabaseInstance {
  const Database* schema = nullptr;  // names/types only
  // rows per table, aligned with schema->tables order
  std::vector<std::vector<Row>> rows;
  uint64_t seed = 0;
};

// Typed literal pools used to populate instances. Values are harvested from
// gold queries and original INSERT rows, so comparison boundary values get
// sampled with high probability.
struct ValuePools {
  std::vector<int64_t> integers;
  std::vector<double> reals;
  std::vector<std::string> texts;

  // Harvests literals from a SQL query's tokens.
  void harvest_query(std::string_view sql);
  // Harvests every INSERT value of the database.
  void harvest_rows(const Database& db);
};

struct InstanceOptions {
  int min_rows = 2;
  int max_rows = 12;
  double null_probability = 0.05;
  double pool_probability = 0.6;
  int max_pk_retries = 64;
};

// Deterministic for equal (schema, seed, pools, options). PK uniqueness is
// enforced by rejection; FK columns sample from referenced PK values.
// Throws std::runtime_error when PK uniqueness is unsatisfiable.
DatabaseInstance generate_instance(const Database& schema, uint64_t seed,
                                   const ValuePools& pools,
                                   const InstanceOptions& options = {});

struct Denotation {
  int arity = 0;
  std::vector<std::vector<Value>> rows;
  bool ordered = false;  // producing query has a top-level ORDER BY
};

struct ExecutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executes a SELECT on an instance via an in-memory SQL backend.
// Throws ExecutionError on syntax errors or unknown functions.
Denotation execute(std::string_view sql, const DatabaseInstance& inst);

// Ordered comparison when either side is ordered, multiset comparison
// otherwise. Arity mismatch is always unequal; column names are ignored.
// Floats compare with 1e-6 tolerance; NULL equals NULL.
bool denotations_equal(const Denotation& a, const Denotation& b);

enum class VerdictStatus { Correct, Incorrect, Undecidable };

struct Verdict {
  VerdictStatus status = VerdictStatus::Undecidable;
  std::optional<uint64_t> witness;  // seed of a distinguishing instance
  std::string reason;               // set for Undecidable
};

struct TsaOptions {
  int max_instances = 1000;
  uint64_t base_seed = 0;
  InstanceOptions instance;
};

// Correct iff no generated instance distinguishes the two queries;
// Incorrect on the first distinguishing instance (witness recorded);
// Undecidable when either query fails to execute.
Verdict test_suite_accuracy(std::string_view gold, std::string_view predicted,
                            const Database& schema, const TsaOptions& options);

struct EvalCell {
  int correct = 0;
  int decided = 0;
  double accuracy() const {
    return decided > 0 ? static_cast<double>(correct) / decided : 0.0;
  }
};

struct UndecidedItem {
  std::string database;
  std::string question;
  std::string gold;
  std::string predicted;
  std::string reason;
};

struct EvalReport {
  // database -> per-hardness cells
  std::map<std::string, std::array<EvalCell, 4>> per_database;
  // Aggregates across databases per hardness (mean/std over per-database
  // accuracies; databases without decided queries at a level are skipped).
  std::array<double, 4> mean{};
  std::array<double, 4> stddev{};
  std::vector<UndecidedItem> undecided;
  int total = 0;
};

using Prediction = std::pair<QueryRecord, std::string>;

EvalReport evaluate_suite(const std::vector<Prediction>& predictions,
                          const std::vector<Database>& dumps,
                          const TsaOptions& options);

}  // namespace sqlaudit
