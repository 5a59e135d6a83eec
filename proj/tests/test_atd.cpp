#include <doctest.h>

#include "sqlaudit/atd.hpp"

using namespace sqlaudit;

namespace {

Database sample_db() {
  return parse_dump(
      "CREATE TABLE city (id INTEGER PRIMARY KEY, name TEXT);\n"
      "CREATE TABLE person (id INTEGER PRIMARY KEY, name TEXT,\n"
      "  city_id INTEGER REFERENCES city (id));\n"
      "INSERT INTO city VALUES (1, 'x');\n"
      "INSERT INTO person VALUES (1, 'a', 1), (2, 'b', 1);\n");
}

}  // namespace

TEST_CASE("atd drops fks and rows, keeps names, types and pks") {
  Database before = sample_db();
  Database after = apply_atd(before);
  CHECK(after.foreign_keys.empty());
  for (const auto& t : after.tables) CHECK(t.rows.empty());
  REQUIRE(after.tables.size() == before.tables.size());
  for (size_t i = 0; i < after.tables.size(); ++i) {
    CHECK(after.tables[i].name == before.tables[i].name);
    CHECK(after.tables[i].primary_key == before.tables[i].primary_key);
    REQUIRE(after.tables[i].columns.size() == before.tables[i].columns.size());
    for (size_t c = 0; c < after.tables[i].columns.size(); ++c) {
      CHECK(after.tables[i].columns[c].name == before.tables[i].columns[c].name);
      CHECK(after.tables[i].columns[c].type == before.tables[i].columns[c].type);
    }
  }
}

TEST_CASE("atd is idempotent") {
  Database once = apply_atd(sample_db());
  Database twice = apply_atd(once);
  CHECK(structurally_equal(once, twice));
}

TEST_CASE("atd commutes with render and parse") {
  Database db = sample_db();
  Database via_model = apply_atd(db);
  Database via_text = apply_atd(parse_dump(render_dump(db)));
  CHECK(structurally_equal(via_model, via_text));
  CHECK(render_dump(via_model) == render_dump(via_text));
}

TEST_CASE("rendered atd text carries no fk or insert tokens") {
  std::string text = render_dump(apply_atd(sample_db()));
  CHECK(text.find("FOREIGN KEY") == std::string::npos);
  CHECK(text.find("REFERENCES") == std::string::npos);
  CHECK(text.find("INSERT") == std::string::npos);
}

TEST_CASE("diff reports exactly what was removed") {
  Database before = sample_db();
  AtdDiff diff = atd_diff(before, apply_atd(before));
  CHECK(diff.removed_fks.size() == 1);
  CHECK(diff.schema_deltas.empty());
  size_t rows = 0;
  for (const auto& [table, count] : diff.removed_rows) rows += count;
  CHECK(rows == 3);
}

TEST_CASE("diff flags schema drift") {
  Database before = sample_db();
  Database after = apply_atd(before);
  after.tables[0].columns[1].name = "renamed";
  AtdDiff diff = atd_diff(before, after);
  CHECK(!diff.schema_deltas.empty());
}
