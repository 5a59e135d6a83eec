#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sqlaudit/hardness.hpp"
#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

struct NameClass {
  bool is_compound = false;
  bool is_abbreviation = false;
};

struct Wordlist {
  std::set<std::string> words;  // lowercase
  int max_abbr_length = 6;

  static Wordlist load(const std::string& path);
  bool contains(std::string_view word) const;
};

// Splits an identifier into tokens at underscores and camel-case boundaries.
std::vector<std::string> split_name_tokens(std::string_view name);

// compound: the name splits into >= 2 tokens. abbreviation: some token,
// lowercased, is absent from the wordlist and no longer than the configured
// length cap.
NameClass classify_column_name(std::string_view name, const Wordlist& wordlist);

struct FactSheet {
  int db_count = 0;
  double avg_tables_per_db = 0.0;
  double avg_columns_per_table = 0.0;
  int query_count = 0;
  double avg_queries_per_db = 0.0;
  double avg_fk_per_columns_per_db = 0.0;
  double avg_compound_per_columns_per_db = 0.0;
  double avg_abbr_per_columns_per_db = 0.0;
};

struct PerDatabaseNameRatios {
  std::string database;
  double compound = 0.0;
  double abbreviation = 0.0;
};

// Per-DB ratios are computed per database, then averaged. Throws
// std::invalid_argument on a query whose database name does not resolve.
FactSheet compute_fact_sheet(const std::vector<Database>& dumps,
                             const std::vector<QueryRecord>& manifest,
                             const Wordlist& wordlist);

// Per-database compound/abbreviation breakdown.
std::vector<PerDatabaseNameRatios> per_database_name_ratios(
    const std::vector<Database>& dumps, const Wordlist& wordlist);

}  // namespace sqlaudit
