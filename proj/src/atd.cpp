#include "sqlaudit/atd.hpp"

#include <set>
#include <tuple>

namespace sqlaudit {

Database apply_atd(const Database& db) {
  Database out = db;
  out.foreign_keys.clear();
  for (auto& t : out.tables) t.rows.clear();
  return out;
}

namespace {

using SchemaTriple = std::tuple<std::string, std::string, std::string>;

std::multiset<SchemaTriple> schema_triples(const Database& db) {
  std::multiset<SchemaTriple> out;
  for (const auto& t : db.tables)
    for (const auto& c : t.columns)
      out.insert({to_lower(t.name), to_lower(c.name), to_lower(c.raw_type)});
  return out;
}

}  // namespace

AtdDiff atd_diff(const Database& before, const Database& after) {
  AtdDiff diff;
  for (const auto& fk : before.foreign_keys) {
    bool kept = false;
    for (const auto& fk2 : after.foreign_keys) {
      if (iequal(fk.from_table, fk2.from_table) &&
          iequal(fk.from_column, fk2.from_column) &&
          iequal(fk.to_table, fk2.to_table) &&
          iequal(fk.to_column, fk2.to_column)) {
        kept = true;
        break;
      }
    }
    if (!kept) diff.removed_fks.push_back(fk);
  }
  for (const auto& t : before.tables) {
    const Table* t2 = after.find_table(t.name);
    size_t after_rows = t2 ? t2->rows.size() : 0;
    if (t.rows.size() > after_rows)
      diff.removed_rows.push_back({t.name, t.rows.size() - after_rows});
  }
  auto a = schema_triples(before);
  auto b = schema_triples(after);
  for (const auto& tr : a) {
    if (b.count(tr) < a.count(tr))
      diff.schema_deltas.push_back("missing after: " + std::get<0>(tr) + "." +
                                   std::get<1>(tr) + " " + std::get<2>(tr));
  }
  for (const auto& tr : b) {
    if (a.count(tr) < b.count(tr))
      diff.schema_deltas.push_back("added after: " + std::get<0>(tr) + "." +
                                   std::get<1>(tr) + " " + std::get<2>(tr));
  }
  return diff;
}

}  // namespace sqlaudit
