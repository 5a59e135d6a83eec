#include "sqlaudit/value.hpp"

#include <charconv>
#include <cmath>

namespace sqlaudit {

std::string format_number(double d) {
  if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) {
    // Integral doubles render without exponent or trailing .0 noise.
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf,
                                 static_cast<long long>(d));
    return std::string(buf, p) + ".0";
  }
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

std::string to_sql_literal(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(bool b) const { return b ? "TRUE" : "FALSE"; }
    std::string operator()(const std::string& s) const {
      std::string out = "'";
      for (char c : s) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += '\'';
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace sqlaudit
