#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace sqlaudit {

// NULL is modeled as std::monostate. NULL and the empty string are distinct.
using Value = std::variant<std::monostate, int64_t, double, std::string, bool>;

inline bool is_null(const Value& v) {
  return std::holds_alternative<std::monostate>(v);
}

// Renders a value as a SQL literal (strings quoted with '' doubling).
std::string to_sql_literal(const Value& v);

// Shortest round-trip decimal form for doubles, fixed form for ints.
std::string format_number(double d);

}  // namespace sqlaudit
