// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Run from ctest or
// directly; fixture paths resolve through the compile-time source dir.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlaudit/atd.hpp"
#include "sqlaudit/contamination.hpp"
#include "sqlaudit/hardness.hpp"
#include "sqlaudit/llm.hpp"
#include "sqlaudit/manifest.hpp"
#include "sqlaudit/mcq.hpp"
#include "sqlaudit/packaging.hpp"
#include "sqlaudit/stats.hpp"
#include "sqlaudit/tsa.hpp"

using namespace sqlaudit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kSrc = SQLAUDIT_SOURCE_DIR;
int g_failures = 0;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

void require_near(double actual, double expected, double tol,
                  const std::string& what) {
  if (std::fabs(actual - expected) > tol)
    throw CheckFailure(what + ": got " + std::to_string(actual) +
                       ", expected " + std::to_string(expected));
}

void criterion(int n, const std::string& label,
               const std::function<void()>& body) {
  try {
    body();
    std::printf("PASS criterion %d: %s\n", n, label.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("FAIL criterion %d: %s (%s)\n", n, label.c_str(), e.what());
  }
  std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> all_fixture_dumps() {
  std::vector<fs::path> dumps;
  for (const char* ds : {"spider_like", "termite_like"})
    for (const auto& e :
         fs::directory_iterator(kSrc + "/fixtures/" + ds + "/dumps"))
      if (e.path().extension() == ".sql") dumps.push_back(e.path());
  require(dumps.size() == 29, "expected 29 fixture dumps");
  return dumps;
}

bool contains_icase(const std::string& haystack, const std::string& needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---- criterion bodies ------------------------------------------------------

void check_roundtrip() {
  auto start = std::chrono::steady_clock::now();
  for (const auto& path : all_fixture_dumps()) {
    std::string raw = read_file(path);
    Database d1 = parse_dump(raw);
    std::string r1 = render_dump(d1);
    Database d2 = parse_dump(r1);
    std::string r2 = render_dump(d2);
    require(r1 == r2, "render not a fixed point for " + path.string());
    require(d1.tables.size() == d2.tables.size(),
            "table count drift in " + path.string());
    require(d1.foreign_keys.size() == d2.foreign_keys.size(),
            "fk count drift in " + path.string());
    for (size_t t = 0; t < d1.tables.size(); ++t) {
      require(d1.tables[t].name == d2.tables[t].name, "table name drift");
      require(d1.tables[t].columns.size() == d2.tables[t].columns.size(),
              "column count drift");
      require(d1.tables[t].rows.size() == d2.tables[t].rows.size(),
              "row count drift");
      for (size_t c = 0; c < d1.tables[t].columns.size(); ++c)
        require(d1.tables[t].columns[c].name == d2.tables[t].columns[c].name,
                "column name drift");
    }
  }
  require(elapsed_s(start) < 5.0, "round-trip exceeded 5 seconds");
}

void check_fact_sheet() {
  Wordlist wl = Wordlist::load(kSrc + "/data/wordlist.txt");

  struct ExpectedSheet {
    const char* dataset;
    int dbs, queries;
    double tables_per_db, cols_per_table, queries_per_db;
    double fk, compound, abbr;
  };
  // frozen from an independent pass over the fixture files
  const ExpectedSheet expected[] = {
      {"spider_like", 19, 38, 72.0 / 19.0, 640.0 / 72.0, 2.0,
       0.12653139258402415, 0.5379212454212455, 0.2339817492449072},
      {"termite_like", 10, 202, 3.2, 5.25, 20.2, 0.14650793650793653,
       0.5196825396825396, 0.2392063492063492},
  };
  for (const auto& e : expected) {
    LoadedDataset ds = load_dataset(kSrc + "/fixtures/" + e.dataset +
                                    "/manifest.json");
    FactSheet fs = compute_fact_sheet(ds.databases, ds.queries, wl);
    std::string tag = std::string(e.dataset) + " ";
    require(fs.db_count == e.dbs, tag + "db count");
    require(fs.query_count == e.queries, tag + "query count");
    require_near(fs.avg_tables_per_db, e.tables_per_db, 1e-9,
                 tag + "tables per db");
    require_near(fs.avg_columns_per_table, e.cols_per_table, 1e-9,
                 tag + "columns per table");
    require_near(fs.avg_queries_per_db, e.queries_per_db, 1e-9,
                 tag + "queries per db");
    require_near(fs.avg_fk_per_columns_per_db, e.fk, 1e-9, tag + "fk ratio");
    require_near(fs.avg_compound_per_columns_per_db, e.compound, 1e-9,
                 tag + "compound ratio");
    require_near(fs.avg_abbr_per_columns_per_db, e.abbr, 1e-9,
                 tag + "abbreviation ratio");
  }
}

void check_dc_replay() {
  auto start = std::chrono::steady_clock::now();
  struct ExpectedDC {
    const char* dataset;
    double mean;
    std::vector<std::pair<const char*, double>> per_db;
  };
  const ExpectedDC expected[] = {
      {"spider_like",
       0.3342,
       {{"battle_death", 4.0 / 25}, {"car_1", 0.0},
        {"concert_singer", 7.0 / 9}, {"course_teach", 0.0},
        {"cre_Doc_Template_Mgt", 2.0 / 5}, {"dog_kennels", 13.0 / 25},
        {"employee_hire_evaluation", 1.0 / 5}, {"flight_2", 0.0},
        {"museum_visit", 0.0}, {"network_1", 1.0},
        {"orchestra", 3.0 / 7}, {"pets_1", 2.0 / 4},
        {"poker_player", 2.0 / 4}, {"real_estate_properties", 6.0 / 13},
        {"singer", 0.0}, {"student_transcripts_tracking", 2.0 / 9},
        {"tvshow", 0.0}, {"voter_1", 1.0}, {"wta_1", 4.0 / 25}}},
      {"termite_like",
       0.1321,
       {{"bowling", 1.0 / 7}, {"centri", 0.0}, {"coronavirus", 4.0 / 9},
        {"farma", 0.0}, {"farmacia", 0.0}, {"galleria", 0.0},
        {"hackathon", 1.0 / 3}, {"pratica", 0.0}, {"recensioni", 2.0 / 5},
        {"voli", 0.0}}},
  };
  for (const auto& e : expected) {
    LoadedDataset ds = load_dataset(kSrc + "/fixtures/" + e.dataset +
                                    "/manifest.json");
    auto store = std::make_shared<TranscriptStore>(TranscriptStore::load(
        kSrc + "/fixtures/replay/" + e.dataset + ".jsonl"));
    ReplayTransport transport(std::move(store));
    DCReport report = run_dc_audit(ds.databases, transport, {}, {}, 42);
    require(report.undecided.empty(),
            std::string(e.dataset) + " has undecided databases");
    require(report.per_database.size() == e.per_db.size(),
            std::string(e.dataset) + " per-database size");
    for (const auto& [db, acc] : e.per_db) {
      auto it = report.per_database.find(db);
      require(it != report.per_database.end(),
              std::string(db) + " missing from report");
      require_near(it->second, acc, 1e-9, std::string(e.dataset) + "/" + db);
    }
    require_near(report.mean, e.mean, 0.01,
                 std::string(e.dataset) + " mean");
  }
  require(elapsed_s(start) < 10.0, "reconstruction replay exceeded 10 seconds");
}

void check_atd() {
  for (const char* dataset : {"spider_like", "termite_like"}) {
    LoadedDataset ds = load_dataset(kSrc + "/fixtures/" + dataset +
                                    "/manifest.json");
    for (const auto& db : ds.databases) {
      Database after = apply_atd(db);
      std::string tag = std::string(dataset) + "/" + db.name + ": ";
      require(after.foreign_keys.empty(), tag + "foreign keys remain");
      require(after.tables.size() == db.tables.size(),
              tag + "table count changed");
      for (size_t t = 0; t < db.tables.size(); ++t) {
        require(after.tables[t].rows.empty(), tag + "rows remain");
        require(after.tables[t].name == db.tables[t].name,
                tag + "table renamed");
        require(after.tables[t].columns.size() ==
                    db.tables[t].columns.size(),
                tag + "column count changed");
        for (size_t c = 0; c < db.tables[t].columns.size(); ++c) {
          require(after.tables[t].columns[c].name ==
                      db.tables[t].columns[c].name,
                  tag + "column renamed");
          require(after.tables[t].columns[c].type ==
                      db.tables[t].columns[c].type,
                  tag + "column type changed");
        }
      }
      std::string rendered = render_dump(after);
      for (const char* token : {"FOREIGN KEY", "REFERENCES", "INSERT"})
        require(!contains_icase(rendered, token),
                tag + std::string(token) + " leaked into rendered dump");
      require(render_dump(apply_atd(after)) == rendered,
              tag + "not idempotent");
      Database reparsed = parse_dump(rendered);
      require(render_dump(reparsed) == rendered, tag + "reparse drift");
      AtdDiff diff = atd_diff(db, after);
      require(diff.schema_deltas.empty(), tag + "unexpected schema delta");
      require(diff.removed_fks.size() == db.foreign_keys.size(),
              tag + "fk removal miscount");
    }
  }
}

void check_masking() {
  const int expected_masks[] = {1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3};
  for (int n = 1; n <= 12; ++n) {
    Database db;
    db.name = "sized";
    Table t;
    t.name = "t";
    for (int i = 0; i < n; ++i)
      t.columns.push_back(
          {"col" + std::to_string(i), SqlType::Integer, "INTEGER", {}, false});
    db.tables.push_back(std::move(t));
    MaskedDump md = mask_columns(db, {}, 17);
    require(static_cast<int>(md.ground_truth.size()) == expected_masks[n - 1],
            "mask count for " + std::to_string(n) + " columns");
    MaskedDump again = mask_columns(db, {}, 17);
    for (size_t i = 0; i < md.ground_truth.size(); ++i)
      require(md.ground_truth[i].position == again.ground_truth[i].position,
              "masking not deterministic");
  }

  // 3 correctly filled masks of 8 must score exactly 0.375
  Database db;
  db.name = "scored";
  for (int t = 0; t < 2; ++t) {
    Table table;
    table.name = "t" + std::to_string(t);
    for (int i = 0; i < 16; ++i)
      table.columns.push_back({"c" + std::to_string(t) + "_" +
                                   std::to_string(i),
                               SqlType::Integer, "INTEGER", {}, false});
    db.tables.push_back(std::move(table));
  }
  MaskedDump md = mask_columns(db, {}, 5);
  require(md.ground_truth.size() == 8, "expected 8 masks");
  Database filled = md.database;
  for (size_t i = 0; i < md.ground_truth.size(); ++i) {
    const auto& gt = md.ground_truth[i];
    for (auto& t : filled.tables)
      if (iequal(t.name, gt.table))
        t.columns[gt.position].name =
            i < 3 ? gt.true_name : "wrong" + std::to_string(i);
  }
  ReconstructionScore score = score_reconstruction(md, render_dump(filled));
  require(score.matched == 3 && score.total == 8, "match count");
  require(score.accuracy == 0.375, "score is not exactly 0.375");
}

void check_hardness() {
  struct Labeled {
    const char* sql;
    HardnessLevel level;
  };
  const Labeled suite[] = {
      {"SELECT name FROM singer", HardnessLevel::Easy},
      {"SELECT name FROM singer WHERE age > 20", HardnessLevel::Easy},
      {"SELECT COUNT(*) FROM concert", HardnessLevel::Easy},
      {"SELECT MAX(age), MIN(age) FROM singer", HardnessLevel::Medium},
      {"SELECT COUNT(*) FROM singer WHERE age > 20", HardnessLevel::Medium},
      {"SELECT a FROM t, u", HardnessLevel::Medium},
      {"SELECT a FROM t JOIN u ON t.id = u.tid", HardnessLevel::Medium},
      {"SELECT t.a FROM t JOIN u ON t.id = u.tid JOIN v ON u.id = v.uid",
       HardnessLevel::Hard},
      {"SELECT COUNT(*) FROM t JOIN u ON t.id = u.tid", HardnessLevel::Hard},
      {"SELECT u.a, SUM(t.x) FROM t JOIN u ON t.id = u.tid GROUP BY u.a",
       HardnessLevel::Hard},
      {"SELECT a FROM t WHERE x IN (SELECT y FROM u)",
       HardnessLevel::ExtraHard},
      {"SELECT a FROM t UNION SELECT b FROM u", HardnessLevel::ExtraHard},
      {"SELECT a FROM t WHERE x = (SELECT MAX(y) FROM u)",
       HardnessLevel::ExtraHard},
      {"SELECT a FROM t INTERSECT SELECT a FROM u", HardnessLevel::ExtraHard},
      {"SELECT a FROM t WHERE x > 1 AND y < 2", HardnessLevel::Medium},
      {"SELECT a FROM t WHERE x BETWEEN 1 AND 5", HardnessLevel::Easy},
      {"SELECT a FROM t WHERE (x > 1 AND y < 2) OR z = 3",
       HardnessLevel::Medium},
      {"SELECT a FROM t ORDER BY a", HardnessLevel::Easy},
      {"SELECT a FROM (SELECT b AS a FROM u)", HardnessLevel::ExtraHard},
      {"SELECT a FROM t WHERE EXISTS (SELECT 1 FROM u WHERE u.tid = t.id)",
       HardnessLevel::ExtraHard},
      {"SELECT a, b FROM t", HardnessLevel::Easy},
      {"SELECT COUNT(*), c FROM t GROUP BY c", HardnessLevel::Easy},
      {"SELECT AVG(x) FROM t WHERE y = 1 AND z = 2", HardnessLevel::Medium},
      {"SELECT a FROM t WHERE x = 1 OR y = 2", HardnessLevel::Medium},
      {"SELECT a FROM t, u, v", HardnessLevel::Hard},
      {"SELECT SUM(x) FROM t JOIN u ON t.id = u.tid WHERE t.a = 1",
       HardnessLevel::Hard},
      {"SELECT a FROM t JOIN u ON t.id = u.tid WHERE u.b > 3",
       HardnessLevel::Medium},
      {"SELECT MIN(a), MAX(a), COUNT(*) FROM t", HardnessLevel::Medium},
      {"SELECT a FROM t EXCEPT SELECT b FROM u", HardnessLevel::ExtraHard},
      {"SELECT a FROM t WHERE x NOT IN (SELECT y FROM u)",
       HardnessLevel::ExtraHard},
      {"SELECT a FROM t JOIN u ON t.id = u.tid JOIN v ON v.id = u.vid "
       "WHERE t.x = 1",
       HardnessLevel::Hard},
      {"SELECT COUNT(*) FROM t, u WHERE t.id = u.tid", HardnessLevel::Hard},
      {"SELECT a FROM t WHERE x BETWEEN 1 AND 5 AND y = 2",
       HardnessLevel::Medium},
      {"SELECT a FROM t ORDER BY a LIMIT 5", HardnessLevel::Easy},
      {"SELECT DISTINCT a FROM t", HardnessLevel::Easy},
      {"SELECT u.a FROM u WHERE u.x = (SELECT AVG(y) FROM u)",
       HardnessLevel::ExtraHard},
      {"SELECT a FROM t UNION ALL SELECT a FROM u", HardnessLevel::ExtraHard},
      {"SELECT a, COUNT(*) FROM t GROUP BY a HAVING COUNT(*) > 2",
       HardnessLevel::Medium},
      {"SELECT a FROM t WHERE x IN (1, 2, 3)", HardnessLevel::Easy},
      {"SELECT a FROM t WHERE x = 'abc'", HardnessLevel::Easy},
  };
  static_assert(std::size(suite) == 40);
  int correct = 0;
  for (const auto& c : suite)
    if (classify(extract_features(c.sql)) == c.level) ++correct;
  require(correct == 40,
          std::to_string(correct) + "/40 labeled queries classified");

  // randomized single-feature increments must never lower the level
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    QueryFeatures f;
    f.table_count = 1 + static_cast<int>(rng() % 5);
    f.join_count = static_cast<int>(rng() % 5);
    f.agg_count = static_cast<int>(rng() % 5);
    f.where_pred_count = static_cast<int>(rng() % 5);
    f.has_nesting = (rng() % 4) == 0;
    f.has_setop = (rng() % 4) == 0;
    HardnessLevel base = classify(f);
    QueryFeatures g = f;
    switch (rng() % 6) {
      case 0: g.table_count++; break;
      case 1: g.join_count++; break;
      case 2: g.agg_count++; break;
      case 3: g.where_pred_count++; break;
      case 4: g.has_nesting = true; break;
      default: g.has_setop = true; break;
    }
    require(static_cast<int>(classify(g)) >= static_cast<int>(base),
            "monotonicity violated at iteration " + std::to_string(i));
  }
}

void check_tsa_pairs() {
  auto start = std::chrono::steady_clock::now();
  Database db = parse_dump(read_file(kSrc + "/fixtures/tsa_pairs/schema.sql"));
  db.name = "pairs";
  json doc = json::parse(read_file(kSrc + "/fixtures/tsa_pairs/pairs.json"));
  const auto& equivalent = doc.at("equivalent");
  const auto& inequivalent = doc.at("inequivalent");
  require(equivalent.size() == 10 && inequivalent.size() == 10,
          "expected 10 pairs per class");

  for (uint64_t base_seed : {0, 1, 2, 3, 4}) {
    TsaOptions options;
    options.max_instances = 1000;
    options.base_seed = base_seed;
    for (const auto& pair : equivalent) {
      std::string gold = pair[0].get<std::string>();
      std::string predicted = pair[1].get<std::string>();
      Verdict v = test_suite_accuracy(gold, predicted, db, options);
      require(v.status == VerdictStatus::Correct,
              "equivalent pair flagged (seed " + std::to_string(base_seed) +
                  "): " + gold + " vs " + predicted);
    }
  }

  TsaOptions options;
  options.max_instances = 1000;
  int caught = 0;
  for (const auto& pair : inequivalent) {
    std::string gold = pair[0].get<std::string>();
    std::string predicted = pair[1].get<std::string>();
    Verdict v = test_suite_accuracy(gold, predicted, db, options);
    if (v.status != VerdictStatus::Incorrect) continue;
    ++caught;
    require(v.witness.has_value(), "incorrect verdict without witness");
    ValuePools pools;
    pools.harvest_query(gold);
    pools.harvest_query(predicted);
    pools.harvest_rows(db);
    DatabaseInstance witness =
        generate_instance(db, *v.witness, pools, options.instance);
    require(!denotations_equal(execute(gold, witness),
                               execute(predicted, witness)),
            "witness does not distinguish: " + gold + " vs " + predicted);
  }
  require(caught >= 9, "only " + std::to_string(caught) +
                           "/10 inequivalent pairs caught");
  require(elapsed_s(start) < 60.0, "pair suite exceeded 60 seconds");
}

void check_bundle_audit() {
  fs::path work = fs::temp_directory_path() / "sqlaudit_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  pack(kSrc + "/fixtures/termite_like", "acceptance passphrase",
       work / "termite.bundle");
  unpack(work / "termite.bundle", "acceptance passphrase", work / "dataset");
  require(fs::exists(work / "dataset" / "manifest.json"),
          "unpacked bundle lacks manifest.json");

  {
    std::ofstream cfg(work / "config.json");
    cfg << json{{"wordlist", kSrc + "/data/wordlist.txt"}}.dump();
  }
  auto run_audit = [&](const std::string& out_dir) {
    std::string cmd = std::string(SQLAUDIT_CLI_PATH) + " --config " +
                      (work / "config.json").string() + " --seed 42 --replay " +
                      kSrc + "/fixtures/replay/termite_like.jsonl" +
                      " audit --manifest " +
                      (work / "dataset" / "manifest.json").string() +
                      " --out-dir " + (work / out_dir).string() +
                      " --instances 50 > " + (work / (out_dir + ".log")).string() +
                      " 2>&1";
    int rc = std::system(cmd.c_str());
    require(rc == 0, "audit exited with status " + std::to_string(rc));
  };
  run_audit("out1");
  run_audit("out2");

  const char* reports[] = {"fact_sheet.md",   "dc_report.md",
                           "dc_per_database.csv", "eval_report.md",
                           "eval_per_database.csv", "atd_prompts.jsonl",
                           "manual_review.jsonl"};
  for (const char* name : reports) {
    std::string a = read_file(work / "out1" / name);
    std::string b = read_file(work / "out2" / name);
    require(a == b, std::string(name) + " differs between identical runs");
  }

  std::string prompts = read_file(work / "out1" / "atd_prompts.jsonl");
  for (const char* token : {"FOREIGN KEY", "REFERENCES", "INSERT"})
    require(!contains_icase(prompts, token),
            std::string("disconnected prompts leak ") + token);

  std::string review = read_file(work / "out1" / "manual_review.jsonl");
  size_t review_lines = 0;
  for (char c : review)
    if (c == '\n') ++review_lines;
  // 202 queries, two translation variants
  require(review_lines <= static_cast<size_t>(0.03 * 404),
          "more than 3% of items need manual review");
  fs::remove_all(work);
}

void check_agreement() {
  AnnotationMatrix unanimous;
  unanimous.choices.assign(5, std::vector<int>(4, 2));
  AnnotationScores s = score_annotations(unanimous, {2, 2, 2, 2, 2});
  require(s.fleiss_kappa == 1.0, "unanimous agreement must give kappa 1");
  require(s.note.has_value(), "degenerate kappa must carry a note");

  // chance-level agreement: 300 items, 2 annotators, uniform choices
  std::mt19937_64 rng(7);
  AnnotationMatrix random;
  std::vector<int> key;
  for (int i = 0; i < 300; ++i) {
    random.choices.push_back({static_cast<int>(rng() % 3),
                              static_cast<int>(rng() % 3)});
    key.push_back(static_cast<int>(rng() % 3));
  }
  AnnotationScores chance = score_annotations(random, key);
  require(std::fabs(chance.fleiss_kappa) <= 0.1,
          "random annotations gave kappa " +
              std::to_string(chance.fleiss_kappa));

  // constructed 40x10 matrix: 26 unanimous, 13 split 8/1/1, one wrong
  // majority split 2/5/3; answer key is i mod 3
  AnnotationMatrix m;
  std::vector<int> answers;
  for (int i = 0; i < 40; ++i) {
    int c = i % 3;
    answers.push_back(c);
    std::vector<int> row(10, c);
    if (i >= 26 && i < 39) {
      row[8] = (c + 1) % 3;
      row[9] = (c + 2) % 3;
    } else if (i == 39) {
      for (int a = 0; a < 10; ++a)
        row[a] = a < 2 ? c : (a < 7 ? (c + 1) % 3 : (c + 2) % 3);
    }
    m.choices.push_back(std::move(row));
  }
  AnnotationScores scored = score_annotations(m, answers);
  require(scored.majority_accuracy == 39.0 / 40.0,
          "majority accuracy must be exactly 0.975, got " +
              std::to_string(scored.majority_accuracy));
  require_near(scored.fleiss_kappa, 0.79, 0.02, "constructed-matrix kappa");
}

void check_mcq() {
  LoadedDataset ds =
      load_dataset(kSrc + "/fixtures/termite_like/manifest.json");
  std::vector<std::string> pool;
  for (size_t i = 0; i < 20; ++i) pool.push_back(ds.queries[i].gold_sql);

  for (size_t q = 0; q < 40; ++q) {
    const std::string& gold = ds.queries[q].gold_sql;
    size_t got = nearest_query_index(gold, pool);
    size_t expect = 0;
    double best = -1.0;
    for (size_t i = 0; i < pool.size(); ++i) {
      double sim = bow_cosine(gold, pool[i]);
      if (sim > best) {
        best = sim;
        expect = i;
      }
    }
    require(got == expect, "nearest-query mismatch at query " +
                               std::to_string(q));
  }

  auto items = build_test(ds.queries, ds.databases, 10, 7);
  require(items.size() == 10, "expected 10 generated items");
  std::set<std::string> golds;
  for (const auto& q : ds.queries) golds.insert(q.gold_sql);
  for (const auto& item : items) {
    std::set<std::string> distinct(item.options.begin(), item.options.end());
    require(distinct.size() == 3, "options are not distinct");
    for (const auto& option : item.options)
      extract_features(option);  // throws if unparseable
    require(golds.count(item.options[item.answer_index]) == 1,
            "answer option is not a dataset gold query");
  }
}

}  // namespace

int main() {
  criterion(1, "dump parse/render round-trip is a fixed point",
            check_roundtrip);
  criterion(2, "fact sheet matches independently computed fixture values",
            check_fact_sheet);
  criterion(3, "masked-column replay reproduces frozen per-database scores",
            check_dc_replay);
  criterion(4, "table disconnection strips links and rows, nothing else",
            check_atd);
  criterion(5, "mask counts, determinism and exact scoring", check_masking);
  criterion(6, "hardness suite 40/40 with monotone classification",
            check_hardness);
  criterion(7, "execution equivalence separates the pair library",
            check_tsa_pairs);
  criterion(8, "bundle round-trip plus byte-identical audit runs",
            check_bundle_audit);
  criterion(9, "annotation scoring: degenerate, chance and mixed agreement",
            check_agreement);
  criterion(10, "question generation uses verifiable distractors", check_mcq);

  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
