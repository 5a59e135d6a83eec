#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqlaudit/llm.hpp"
#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

struct MaskedPosition {
  std::string table;
  int position = 0;  // column index within the table
  std::string true_name;
};

struct MaskedDump {
  Database database;  // masked columns bear [MASK]; zero rows
  std::vector<MaskedPosition> ground_truth;  // (table order, column position)
  uint64_t seed = 0;
};

struct MaskOptions {
  double ratio = 0.25;
  bool exclude_pk = false;
};

// Per table, k = max(1, round(ratio * column_count)) columns are replaced by
// the mask token, chosen without replacement by the seeded RNG. All rows are
// dropped. Deterministic for equal (db, options, seed).
// Throws std::invalid_argument for an empty database or a table whose every
// column is excluded.
MaskedDump mask_columns(const Database& db, const MaskOptions& options,
                        uint64_t seed);

// Single user message: fixed instruction preamble followed by the rendered
// masked dump.
ConversationScript build_dc_prompt(const MaskedDump& md);

struct ReconstructionScore {
  double accuracy = 0.0;  // in [0,1]
  int matched = 0;
  int total = 0;
  std::optional<std::string> parse_failure;  // note, never a crash
};

// Fraction of masked positions whose predicted name equals the true name,
// case-insensitively after stripping quotes and surrounding whitespace.
// Unalignable or unparseable reconstructions score those masks incorrect.
ReconstructionScore score_reconstruction(const MaskedDump& md,
                                         std::string_view reconstruction);

struct DCReport {
  std::map<std::string, double> per_database;
  std::vector<std::string> undecided;  // databases with transport failures
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// One masked-prompt round trip per database; aggregates per-database
// accuracies. Transport failures mark the database undecided and exclude it
// from the aggregates.
DCReport run_dc_audit(const std::vector<Database>& dataset, Transport& client,
                      const ModelParams& params, const MaskOptions& options,
                      uint64_t seed);

}  // namespace sqlaudit
