#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

struct QueryFeatures {
  int table_count = 0;  // distinct referenced tables, across all nesting
  int join_count = 0;   // explicit JOINs plus implicit comma-joins
  int agg_count = 0;    // COUNT/SUM/AVG/MIN/MAX applications
  int where_pred_count = 0;
  bool has_nesting = false;
  bool has_setop = false;
  bool has_order_by = false;  // top-level only
};

enum class HardnessLevel { Easy, Medium, Hard, ExtraHard };

std::string_view hardness_name(HardnessLevel level);
// Accepts EASY/MEDIUM/HARD/EXTRA_HARD (also EXTRA-HARD), case-insensitive.
std::optional<HardnessLevel> hardness_from_name(std::string_view name);

struct QueryRecord {
  std::string nl_question;
  std::string gold_sql;
  HardnessLevel hardness = HardnessLevel::Easy;
  std::string database_name;
};

// Extracts features from a SELECT query. The schema is used to sanity-check
// table references when provided; parsing itself is schema-independent.
// Throws ParseError for non-SELECT input or a SELECT without FROM.
QueryFeatures extract_features(std::string_view sql,
                               const Database* schema = nullptr);

HardnessLevel classify(const QueryFeatures& f);

// Convenience: extract + classify.
HardnessLevel classify_query(std::string_view sql,
                             const Database* schema = nullptr);

struct HardnessHistogram {
  // database name -> counts indexed by level (4 entries)
  std::map<std::string, std::array<int, 4>> per_database;
  std::array<int, 4> totals{};
};

HardnessHistogram hardness_histogram(const std::vector<QueryRecord>& records);

// True when the query has a top-level ORDER BY (outside any subquery).
// Shared with denotation comparison.
bool has_top_level_order_by(std::string_view sql);

}  // namespace sqlaudit
