#include <doctest.h>

#include <algorithm>
#include <set>

#include "sqlaudit/llm.hpp"
#include "sqlaudit/tsa.hpp"

using namespace sqlaudit;

namespace {

Database pair_schema() {
  Database db = parse_dump(
      "CREATE TABLE city (id INTEGER PRIMARY KEY, name TEXT, pop INTEGER);\n"
      "CREATE TABLE people (id INTEGER PRIMARY KEY, name TEXT, age INTEGER,\n"
      "  city_id INTEGER REFERENCES city (id));\n"
      "INSERT INTO city VALUES (1, 'aston', 40);\n"
      "INSERT INTO people VALUES (1, 'ada', 9, 1);\n");
  db.name = "pairs";
  return db;
}

ValuePools pools_for(const Database& db, std::string_view sql) {
  ValuePools pools;
  pools.harvest_query(sql);
  pools.harvest_rows(db);
  return pools;
}

}  // namespace

TEST_CASE("literal pools harvest queries and seed rows") {
  ValuePools pools;
  pools.harvest_query(
      "SELECT a FROM t WHERE x = 5 AND nm = 'bob' AND f > 2.5 AND g = -3");
  CHECK(std::count(pools.integers.begin(), pools.integers.end(), 5) == 1);
  CHECK(std::count(pools.integers.begin(), pools.integers.end(), -3) == 1);
  CHECK(std::count(pools.reals.begin(), pools.reals.end(), 2.5) == 1);
  CHECK(std::count(pools.texts.begin(), pools.texts.end(), "bob") == 1);

  Database db = pair_schema();
  pools.harvest_rows(db);
  CHECK(std::count(pools.texts.begin(), pools.texts.end(), "aston") == 1);
  CHECK(std::count(pools.integers.begin(), pools.integers.end(), 40) == 1);
}

TEST_CASE("instances are deterministic, bounded, and key-consistent") {
  Database db = pair_schema();
  ValuePools pools = pools_for(db, "SELECT age FROM people WHERE age > 5");

  DatabaseInstance a = generate_instance(db, 99, pools);
  DatabaseInstance b = generate_instance(db, 99, pools);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t t = 0; t < a.rows.size(); ++t) {
    REQUIRE(a.rows[t].size() == b.rows[t].size());
    for (size_t r = 0; r < a.rows[t].size(); ++r)
      CHECK(a.rows[t][r].values == b.rows[t][r].values);
  }

  for (uint64_t seed = 0; seed < 30; ++seed) {
    DatabaseInstance inst = generate_instance(db, seed, pools);
    // city is table 0, people table 1
    std::set<int64_t> city_ids;
    for (const auto& row : inst.rows[0]) {
      CHECK(!is_null(row.values[0]));
      city_ids.insert(std::get<int64_t>(row.values[0]));
    }
    CHECK(city_ids.size() == inst.rows[0].size());  // pk uniqueness
    CHECK(inst.rows[0].size() >= 2);
    CHECK(inst.rows[0].size() <= 12);
    for (const auto& row : inst.rows[1]) {
      const Value& fk = row.values[3];
      if (!is_null(fk))
        CHECK(city_ids.count(std::get<int64_t>(fk)) == 1);
    }
  }
}

TEST_CASE("execution runs against an in-memory backend") {
  Database db = pair_schema();
  DatabaseInstance inst;
  inst.schema = &db;
  inst.rows.resize(2);
  inst.rows[0] = {Row{{int64_t{1}, std::string("a"), int64_t{10}}},
                  Row{{int64_t{2}, std::string("b"), int64_t{20}}}};
  inst.rows[1] = {Row{{int64_t{1}, std::string("ada"), int64_t{9}, int64_t{1}}}};

  Denotation d = execute("SELECT COUNT(*) FROM city", inst);
  REQUIRE(d.rows.size() == 1);
  CHECK(std::get<int64_t>(d.rows[0][0]) == 2);
  CHECK(!d.ordered);

  Denotation ordered = execute("SELECT name FROM city ORDER BY pop DESC", inst);
  CHECK(ordered.ordered);
  REQUIRE(ordered.rows.size() == 2);
  CHECK(std::get<std::string>(ordered.rows[0][0]) == "b");

  CHECK_THROWS_AS(execute("SELECT DATEDIFF(id, id) FROM city", inst),
                  ExecutionError);
  CHECK_THROWS_AS(execute("SELECT nothing FROM missing", inst),
                  ExecutionError);
}

TEST_CASE("denotation comparison: multiset, order, tolerance, NULLs") {
  Denotation a, b;
  a.arity = b.arity = 1;
  a.rows = {{int64_t{1}}, {int64_t{2}}};
  b.rows = {{int64_t{2}}, {int64_t{1}}};
  CHECK(denotations_equal(a, b));  // multiset comparison

  b.ordered = true;
  CHECK(!denotations_equal(a, b));  // sequence comparison kicks in
  b.ordered = false;

  Denotation c = a;
  c.rows = {{1.0000000001}, {int64_t{2}}};
  CHECK(denotations_equal(a, c));  // 1e-6 float tolerance, cross-typed

  Denotation d = a;
  d.rows = {{1.1}, {int64_t{2}}};
  CHECK(!denotations_equal(a, d));

  Denotation n1, n2;
  n1.arity = n2.arity = 1;
  n1.rows = {{Value{}}};
  n2.rows = {{Value{}}};
  CHECK(denotations_equal(n1, n2));  // NULL equals NULL

  Denotation wide;
  wide.arity = 2;
  CHECK(!denotations_equal(a, wide));
}

TEST_CASE("equivalent queries are judged Correct") {
  Database db = pair_schema();
  TsaOptions options;
  options.max_instances = 200;
  Verdict v = test_suite_accuracy("SELECT name FROM people WHERE age > 5",
                                  "SELECT name FROM people WHERE 5 < age", db,
                                  options);
  CHECK(v.status == VerdictStatus::Correct);
}

TEST_CASE("a distinguishing instance yields Incorrect with a live witness") {
  Database db = pair_schema();
  TsaOptions options;
  options.max_instances = 500;
  std::string gold = "SELECT name FROM people WHERE age > 5";
  std::string predicted = "SELECT name FROM people WHERE age >= 5";
  Verdict v = test_suite_accuracy(gold, predicted, db, options);
  REQUIRE(v.status == VerdictStatus::Incorrect);
  REQUIRE(v.witness.has_value());

  // the witness seed regenerates an instance that still distinguishes
  ValuePools pools;
  pools.harvest_query(gold);
  pools.harvest_query(predicted);
  pools.harvest_rows(db);
  DatabaseInstance witness =
      generate_instance(db, *v.witness, pools, options.instance);
  CHECK(!denotations_equal(execute(gold, witness),
                           execute(predicted, witness)));
}

TEST_CASE("execution failures make the pair Undecidable with a reason") {
  Database db = pair_schema();
  TsaOptions options;
  options.max_instances = 5;
  Verdict v = test_suite_accuracy("SELECT name FROM people",
                                  "SELECT DATEDIFF(age, age) FROM people", db,
                                  options);
  CHECK(v.status == VerdictStatus::Undecidable);
  CHECK(!v.reason.empty());
}

TEST_CASE("suite evaluation groups by database and hardness") {
  Database db = pair_schema();
  TsaOptions options;
  options.max_instances = 50;

  QueryRecord easy{"q", "SELECT name FROM people", HardnessLevel::Easy,
                   "pairs"};
  QueryRecord medium{"q", "SELECT COUNT(*) FROM people WHERE age > 5",
                     HardnessLevel::Medium, "pairs"};
  std::vector<Prediction> predictions = {
      {easy, "SELECT name FROM people"},
      {medium, "SELECT COUNT(*) FROM people WHERE age > 6"},
      {easy, std::string(kExtractionFailure)},
  };
  EvalReport report = evaluate_suite(predictions, {db}, options);
  CHECK(report.total == 3);
  const auto& cells = report.per_database.at("pairs");
  CHECK(cells[0].decided == 2);
  CHECK(cells[0].correct == 1);  // extraction failure counts as incorrect
  CHECK(cells[1].decided == 1);
  CHECK(cells[1].correct == 0);
  CHECK(report.undecided.empty());
}
