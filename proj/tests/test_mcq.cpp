#include <doctest.h>

#include <cmath>
#include <set>

#include "sqlaudit/mcq.hpp"

using namespace sqlaudit;

namespace {

Database mcq_schema() {
  Database db = parse_dump(
      "CREATE TABLE city (id INTEGER PRIMARY KEY, name TEXT, pop INTEGER);\n"
      "CREATE TABLE people (id INTEGER PRIMARY KEY, name TEXT, age INTEGER,\n"
      "  city_id INTEGER REFERENCES city (id));\n");
  db.name = "quizdb";
  return db;
}

std::vector<QueryRecord> mcq_dataset() {
  const char* sqls[] = {
      "SELECT name FROM people WHERE age > 5",
      "SELECT COUNT(*) FROM people",
      "SELECT name FROM city ORDER BY pop",
      "SELECT people.name FROM people JOIN city ON people.city_id = city.id",
      "SELECT MAX(age) FROM people",
      "SELECT name FROM people WHERE age > 5 AND city_id = 1",
      "SELECT pop FROM city WHERE name = 'aston'",
      "SELECT AVG(pop) FROM city",
      "SELECT name FROM people WHERE city_id IN (SELECT id FROM city)",
      "SELECT age FROM people ORDER BY age DESC",
  };
  std::vector<QueryRecord> out;
  int i = 0;
  for (const char* sql : sqls)
    out.push_back({"question " + std::to_string(i++), sql,
                   HardnessLevel::Easy, "quizdb"});
  return out;
}

}  // namespace

TEST_CASE("bag-of-words cosine, hand-checked") {
  // {select,a,from,t} vs {select,b,from,t}: dot 3, norms 2 and 2
  CHECK(bow_cosine("SELECT a FROM t", "SELECT b FROM t") ==
        doctest::Approx(0.75));
  CHECK(bow_cosine("SELECT a FROM t", "select A from T") ==
        doctest::Approx(1.0));
  CHECK(bow_cosine("SELECT a FROM t", "") == 0.0);
  // underscores separate tokens
  CHECK(bow_cosine("city_name", "name city") == doctest::Approx(1.0));
  // repeated tokens weigh in as counts
  CHECK(bow_cosine("a a b", "a b") ==
        doctest::Approx((2.0 + 1.0) / (std::sqrt(5.0) * std::sqrt(2.0))));
}

TEST_CASE("nearest query matches an exhaustive scan and breaks ties early") {
  std::vector<std::string> pool = {
      "SELECT x FROM u",
      "SELECT a FROM t WHERE b = 1",
      "SELECT a FROM t",
      "SELECT a FROM t",  // duplicate: tie resolved to the earlier entry
  };
  std::string gold = "SELECT a FROM t";
  size_t best = nearest_query_index(gold, pool);

  size_t expect = 0;
  double expect_sim = -1.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    double sim = bow_cosine(gold, pool[i]);
    if (sim > expect_sim) {
      expect_sim = sim;
      expect = i;
    }
  }
  CHECK(best == expect);
  CHECK(best == 2);
  CHECK_THROWS_AS(nearest_query_index(gold, {}), std::invalid_argument);
}

TEST_CASE("perturbed queries parse and differ from the input") {
  Database db = mcq_schema();
  for (uint64_t seed = 0; seed < 25; ++seed) {
    for (const auto& rec : mcq_dataset()) {
      std::string perturbed = perturb_query(rec.gold_sql, db, seed);
      CHECK(perturbed != rec.gold_sql);
      CHECK_NOTHROW(extract_features(perturbed));
    }
  }
}

TEST_CASE("generated items have three distinct parseable options") {
  auto items = build_test(mcq_dataset(), {mcq_schema()}, 6, 13);
  REQUIRE(items.size() == 6);
  for (const auto& item : items) {
    std::set<std::string> distinct(item.options.begin(), item.options.end());
    CHECK(distinct.size() == 3);
    REQUIRE(item.answer_index >= 0);
    REQUIRE(item.answer_index < 3);
    CHECK(!item.distractor_kinds[item.answer_index].has_value());
    int perturbed = 0, nearest = 0;
    for (const auto& kind : item.distractor_kinds) {
      if (kind == DistractorKind::Perturbed) ++perturbed;
      if (kind == DistractorKind::BowNearest) ++nearest;
    }
    CHECK(perturbed == 1);
    CHECK(nearest == 1);
    for (const auto& option : item.options)
      CHECK_NOTHROW(extract_features(option));
  }
  // deterministic per seed
  auto again = build_test(mcq_dataset(), {mcq_schema()}, 6, 13);
  for (size_t i = 0; i < items.size(); ++i)
    CHECK(items[i].options == again[i].options);
}

TEST_CASE("annotation scoring, hand-computed two-item example") {
  // item 1: choices 0,0,1 -> P = 1/3; item 2: 1,1,1 -> P = 1
  // marginals: p0 = 1/3, p1 = 2/3; Pe = 5/9; kappa = (2/3-5/9)/(4/9) = 0.25
  AnnotationMatrix m;
  m.choices = {{0, 0, 1}, {1, 1, 1}};
  AnnotationScores s = score_annotations(m, {0, 1});
  CHECK(s.fleiss_kappa == doctest::Approx(0.25));
  CHECK(s.majority_accuracy == doctest::Approx(1.0));
  CHECK(s.per_annotator_accuracy[0] == doctest::Approx(1.0));
  CHECK(s.per_annotator_accuracy[2] == doctest::Approx(0.5));
}

TEST_CASE("majority ties score as incorrect") {
  AnnotationMatrix m;
  m.choices = {{0, 1}, {1, 1}};
  AnnotationScores s = score_annotations(m, {0, 1});
  CHECK(s.majority_accuracy == doctest::Approx(0.5));
}

TEST_CASE("degenerate all-identical matrix reports kappa 1 with a note") {
  AnnotationMatrix m;
  m.choices = {{1, 1, 1}, {1, 1, 1}};
  AnnotationScores s = score_annotations(m, {1, 1});
  CHECK(s.fleiss_kappa == doctest::Approx(1.0));
  CHECK(s.note.has_value());
}

TEST_CASE("annotation matrix validation") {
  AnnotationMatrix ragged;
  ragged.choices = {{0, 1}, {0}};
  CHECK_THROWS_AS(score_annotations(ragged, {0, 0}), std::invalid_argument);

  AnnotationMatrix single;
  single.choices = {{0}};
  CHECK_THROWS_AS(score_annotations(single, {0}), std::invalid_argument);

  AnnotationMatrix out_of_range;
  out_of_range.choices = {{0, 3}};
  CHECK_THROWS_AS(score_annotations(out_of_range, {0}),
                  std::invalid_argument);

  AnnotationMatrix ok;
  ok.choices = {{0, 1}};
  CHECK_THROWS_AS(score_annotations(ok, {0, 1}), std::invalid_argument);
}
