#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqlaudit/value.hpp"

namespace sqlaudit {

inline constexpr std::string_view kMaskToken = "[MASK]";

enum class SqlType { Integer, Real, Text, Date, Boolean, Other };

struct Column {
  std::string name;
  SqlType type = SqlType::Other;
  std::string raw_type;  // original spelling, kept verbatim for Other
  // Opaque per-column annotations (NOT NULL, UNIQUE, DEFAULT ...), retained
  // but not interpreted.
  std::vector<std::string> annotations;
  bool masked = false;  // true only inside masked dumps; name is then [MASK]
};

struct Row {
  std::vector<Value> values;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::string> primary_key;  // ordered subset of column names
  std::vector<Row> rows;

  const Column* find_column(std::string_view name) const;
  int column_index(std::string_view name) const;  // -1 if absent
};

struct ForeignKey {
  std::string from_table;
  std::string from_column;
  std::string to_table;
  std::string to_column;
};

struct Database {
  std::string name;
  std::vector<Table> tables;
  std::vector<ForeignKey> foreign_keys;

  const Table* find_table(std::string_view name) const;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Case-insensitive identifier comparison; storage preserves original casing.
bool iequal(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

// Parses a dump of CREATE TABLE / INSERT statements. Unsupported statements
// are skipped; a note per skipped statement lands in *warnings if given.
// Throws ParseError on malformed input, duplicate names, dangling FKs or
// INSERT arity mismatches.
Database parse_dump(std::string_view text,
                    std::vector<std::string>* warnings = nullptr);

/// Canonical deterministic rendering: one CREATE TABLE per table in stored
// order, double-quoted identifiers, table-level PK/FK clauses, then INSERTs
// in stored row order. Byte-identical across runs for equal inputs.
std::string render_dump(const Database& db);

struct Violation {
  std::string where;  // table or table.column or fk description
  std::string rule;
};

// Empty iff all model invariants hold. The [MASK] token is exempt from the
// column-uniqueness rule so masked dumps stay valid.
std::vector<Violation> validate(const Database& db);

// Structural equality, used by roundtrip checks.
bool structurally_equal(const Database& a, const Database& b);

}  // namespace sqlaudit
