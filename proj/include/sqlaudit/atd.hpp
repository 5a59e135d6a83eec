#pragma once

#include <string>
#include <vector>

#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

// Adversarial Table Disconnection: drops every foreign-key constraint
// (table-level and inline) and every seed row. Table names, column names,
// types and primary keys are untouched. Idempotent.
Database apply_atd(const Database& db);

struct AtdDiff {
  std::vector<ForeignKey> removed_fks;
  std::vector<std::pair<std::string, size_t>> removed_rows;  // table, count
  // Any unexpected (table, column, type) delta; empty for a proper ATD pair.
  std::vector<std::string> schema_deltas;
};

AtdDiff atd_diff(const Database& before, const Database& after);

}  // namespace sqlaudit
