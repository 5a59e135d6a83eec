// Regenerates everything under fixtures/: two small benchmark datasets with
// varied raw dump syntax, replay transcripts for the chat-completion stages,
// and the query-pair library for the execution-equivalence checks. The output
// is fully deterministic; run from the repository root after changing any of
// the plans below, then commit the result.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <vector>

#include <json.hpp>

#include "sqlaudit/atd.hpp"
#include "sqlaudit/contamination.hpp"
#include "sqlaudit/hardness.hpp"
#include "sqlaudit/llm.hpp"
#include "sqlaudit/sql_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sqlaudit;

namespace {

constexpr uint64_t kSeed = 42;

struct DbPlan {
  std::string name;
  std::vector<int> col_counts;  // one table per entry
  int dc_correct = 0;           // masks answered correctly in the DC replay
};

// Table column counts are chosen so that the per-table mask count
// (max(1, round(0.25 n)) -> 1 for n=4, 3 for n=12, 5 for n=20) sums to the
// denominator of the intended per-database DC-accuracy.
const std::vector<DbPlan> kSpiderPlans = {
    {"battle_death", {20, 20, 20, 20, 20}, 4},
    {"car_1", {4, 4, 4, 4, 4, 4}, 0},
    {"concert_singer", {12, 12, 12}, 7},
    {"course_teach", {4, 4, 4, 4}, 0},
    {"cre_Doc_Template_Mgt", {12, 4, 4}, 2},
    {"dog_kennels", {20, 20, 20, 20, 20}, 13},
    {"employee_hire_evaluation", {12, 4, 4}, 1},
    {"flight_2", {4, 4, 4, 4}, 0},
    {"museum_visit", {4, 4, 4}, 0},
    {"network_1", {4, 4, 4}, 3},
    {"orchestra", {12, 4, 4, 4, 4}, 3},
    {"pets_1", {4, 4, 4, 4}, 2},
    {"poker_player", {4, 4, 4, 4}, 2},
    {"real_estate_properties", {20, 20, 12}, 6},
    {"singer", {4, 4, 4}, 0},
    {"student_transcripts_tracking", {12, 12, 12}, 2},
    {"tvshow", {4, 4, 4}, 0},
    {"voter_1", {4, 4, 4}, 3},
    {"wta_1", {20, 20, 20, 20, 20}, 4},
};

const std::vector<DbPlan> kTermitePlans = {
    {"bowling", {12, 4, 4, 4, 4}, 1},
    {"centri", {4, 4, 4}, 0},
    {"coronavirus", {12, 12, 12}, 4},
    {"farma", {4, 4, 4}, 0},
    {"farmacia", {4, 4, 4}, 0},
    {"galleria", {4, 4, 4}, 0},
    {"hackathon", {4, 4, 4}, 1},
    {"pratica", {4, 4, 4}, 0},
    {"recensioni", {12, 4, 4}, 2},
    {"voli", {4, 4, 4}, 0},
};

const char* kTableNames[] = {"person", "event",   "venue",  "record",
                             "entry",  "item",    "grp",    "session",
                             "result", "note",    "league", "batch"};

const std::pair<const char*, SqlType> kColPool[] = {
    {"name", SqlType::Text},          {"full_name", SqlType::Text},
    {"city", SqlType::Text},          {"zip_cd", SqlType::Text},
    {"descr", SqlType::Text},         {"start_date", SqlType::Date},
    {"end_date", SqlType::Date},      {"birth_year", SqlType::Integer},
    {"cnt", SqlType::Integer},        {"total_amount", SqlType::Real},
    {"score", SqlType::Real},         {"rank_pos", SqlType::Integer},
    {"status", SqlType::Text},        {"email_address", SqlType::Text},
    {"country", SqlType::Text},       {"notes", SqlType::Text},
    {"lvl", SqlType::Integer},        {"category", SqlType::Text},
    {"weight_kg", SqlType::Real},     {"is_active", SqlType::Boolean},
    {"pop_total", SqlType::Integer},  {"avg_rating", SqlType::Real},
    {"owner_nm", SqlType::Text},      {"area_code", SqlType::Integer},
};
constexpr int kColPoolSize = 24;

const char* kWords[] = {"alpha", "beta",  "gamma", "delta",
                        "omega", "sigma", "kappa", "zeta"};

const char* type_name(SqlType t) {
  switch (t) {
    case SqlType::Integer: return "INTEGER";
    case SqlType::Real: return "REAL";
    case SqlType::Text: return "TEXT";
    case SqlType::Date: return "DATE";
    case SqlType::Boolean: return "BOOLEAN";
    default: return "TEXT";
  }
}

Value cell_value(SqlType t, int row, int col) {
  switch (t) {
    case SqlType::Integer: return int64_t{10 + 7 * row + col};
    case SqlType::Real: return 2.5 * (row + 1) + col;
    case SqlType::Date:
      return std::string("2020-0") + std::to_string(row % 9 + 1) + "-15";
    case SqlType::Boolean: return int64_t{row % 2};
    default: return std::string(kWords[(row + col) % 8]);
  }
}

Database build_db(const DbPlan& plan, int db_index) {
  Database db;
  db.name = plan.name;
  for (size_t t = 0; t < plan.col_counts.size(); ++t) {
    Table table;
    table.name = kTableNames[(db_index + t) % 12];
    table.columns.push_back({"id", SqlType::Integer, "INTEGER", {}, false});
    table.primary_key = {"id"};
    int n = plan.col_counts[t];
    int data_cols = n - 1 - (t > 0 ? 1 : 0);
    int offset = (db_index * 3 + static_cast<int>(t) * 5) % kColPoolSize;
    for (int c = 0; c < data_cols; ++c) {
      const auto& [name, type] = kColPool[(offset + c) % kColPoolSize];
      table.columns.push_back({name, type, type_name(type), {}, false});
    }
    if (t > 0) {
      std::string fk_col = db.tables[t - 1].name + "_id";
      table.columns.push_back({fk_col, SqlType::Integer, "INTEGER", {}, false});
      db.foreign_keys.push_back({table.name, fk_col, db.tables[t - 1].name, "id"});
    }
    for (int r = 0; r < 3; ++r) {
      Row row;
      row.values.push_back(int64_t{r + 1});
      for (int c = 0; c < data_cols; ++c)
        row.values.push_back(
            cell_value(table.columns[c + 1].type, r, c + offset));
      if (t > 0) row.values.push_back(int64_t{(r % 3) + 1});
      table.rows.push_back(std::move(row));
    }
    db.tables.push_back(std::move(table));
  }
  return db;
}

// ---- raw dump serialization with per-table syntax variety ------------------

std::string quote(const std::string& name, int style) {
  switch (style) {
    case 1: return "\"" + name + "\"";
    case 2: return "`" + name + "`";
    case 3: return "[" + name + "]";
    default: return name;
  }
}

std::string raw_dump(const Database& db, int db_index) {
  std::string out = "-- dump of " + db.name + "\n";
  for (size_t t = 0; t < db.tables.size(); ++t) {
    const Table& table = db.tables[t];
    int style = (db_index + static_cast<int>(t)) % 4;
    bool table_level_keys = (style == 1 || style == 3);
    out += "CREATE TABLE " + quote(table.name, style) + " (\n";
    for (size_t c = 0; c < table.columns.size(); ++c) {
      const Column& col = table.columns[c];
      out += "  " + quote(col.name, style) + " " + col.raw_type;
      if (!table_level_keys && col.name == "id") out += " PRIMARY KEY";
      const ForeignKey* fk = nullptr;
      for (const auto& candidate : db.foreign_keys)
        if (iequal(candidate.from_table, table.name) &&
            iequal(candidate.from_column, col.name))
          fk = &candidate;
      if (!table_level_keys && fk)
        out += " REFERENCES " + quote(fk->to_table, style) + " (" +
               quote(fk->to_column, style) + ")";
      if (c + 1 < table.columns.size() || table_level_keys) out += ",";
      out += "\n";
    }
    if (table_level_keys) {
      out += "  PRIMARY KEY (" + quote("id", style) + ")";
      for (const auto& fk : db.foreign_keys)
        if (iequal(fk.from_table, table.name))
          out += ",\n  FOREIGN KEY (" + quote(fk.from_column, style) +
                 ") REFERENCES " + quote(fk.to_table, style) + " (" +
                 quote(fk.to_column, style) + ")";
      out += "\n";
    }
    out += ");\n";

    auto row_tuple = [&](const Row& row) {
      std::string tuple = "(";
      for (size_t v = 0; v < row.values.size(); ++v) {
        if (v) tuple += ", ";
        tuple += to_sql_literal(row.values[v]);
      }
      return tuple + ")";
    };
    if (style == 2) {
      out += "INSERT INTO " + quote(table.name, style) + " VALUES ";
      for (size_t r = 0; r < table.rows.size(); ++r)
        out += (r ? ", " : "") + row_tuple(table.rows[r]);
      out += ";\n";
    } else {
      for (const auto& row : table.rows) {
        out += "INSERT INTO " + quote(table.name, style);
        if (style == 1) {
          out += " (";
          for (size_t c = 0; c < table.columns.size(); ++c)
            out += (c ? ", " : "") + quote(table.columns[c].name, style);
          out += ")";
        }
        out += " VALUES " + row_tuple(row) + ";\n";
      }
    }
    out += "\n";
  }
  return out;
}

// ---- query synthesis -------------------------------------------------------

struct FixtureQuery {
  std::string question;
  std::string sql;
};

std::string data_col(const Database& db, size_t t, int k) {
  return db.tables[t].columns[1 + k].name;
}

std::vector<FixtureQuery> termite_queries(const Database& db, bool extra) {
  const std::string T0 = db.tables[0].name;
  const std::string T1 = db.tables[1].name;
  const std::string T2 = db.tables[2].name;
  const std::string d00 = data_col(db, 0, 0), d01 = data_col(db, 0, 1);
  const std::string d10 = data_col(db, 1, 0);
  const std::string d20 = data_col(db, 2, 0);
  const std::string fk1 = T0 + "_id";
  const std::string fk2 = T1 + "_id";
  const std::string lit0 = to_sql_literal(db.tables[0].rows[0].values[1]);

  std::vector<FixtureQuery> qs = {
      {"List every " + d00 + " in " + T0 + ".",
       "SELECT " + d00 + " FROM " + T0},
      {"Show the " + d01 + " of the " + T0 + " whose " + d00 + " is " + lit0 +
           ".",
       "SELECT " + d01 + " FROM " + T0 + " WHERE " + d00 + " = " + lit0},
      {"How many rows does " + T1 + " contain?",
       "SELECT COUNT(*) FROM " + T1},
      {"List the ids of " + T2 + " in ascending order.",
       "SELECT id FROM " + T2 + " ORDER BY id"},
      {"Which distinct " + d10 + " values appear in " + T1 + "?",
       "SELECT DISTINCT " + d10 + " FROM " + T1},
      {"How many " + T0 + " rows have an id above 1?",
       "SELECT COUNT(*) FROM " + T0 + " WHERE id > 1"},
      {"What are the largest and smallest " + T0 + " ids of at least 1?",
       "SELECT MAX(id), MIN(id) FROM " + T0 + " WHERE id >= 1"},
      {"List the " + T0 + " ids that some " + T1 + " row refers to.",
       "SELECT " + T0 + ".id FROM " + T0 + ", " + T1 + " WHERE " + T1 + "." +
           fk1 + " = " + T0 + ".id"},
      {"Show the " + d10 + " of every " + T1 + " with a matching " + T0 + ".",
       "SELECT " + T1 + "." + d10 + " FROM " + T1 + " JOIN " + T0 + " ON " +
           T1 + "." + fk1 + " = " + T0 + ".id"},
      {"What is the average id of " + T2 + " rows with id at least 1?",
       "SELECT AVG(id) FROM " + T2 + " WHERE id >= 1"},
      {"How many " + T1 + " rows link to a " + T0 + " row?",
       "SELECT COUNT(*) FROM " + T1 + " JOIN " + T0 + " ON " + T1 + "." +
           fk1 + " = " + T0 + ".id"},
      {"List the " + d20 + " of " + T2 + " rows reachable from " + T0 + ".",
       "SELECT " + T2 + "." + d20 + " FROM " + T2 + " JOIN " + T1 + " ON " +
           T2 + "." + fk2 + " = " + T1 + ".id JOIN " + T0 + " ON " + T1 +
           "." + fk1 + " = " + T0 + ".id"},
      {"Per " + d00 + ", how many " + T1 + " rows attach to each " + T0 + "?",
       "SELECT " + T0 + "." + d00 + ", COUNT(*) FROM " + T0 + " JOIN " + T1 +
           " ON " + T1 + "." + fk1 + " = " + T0 + ".id GROUP BY " + T0 + "." +
           d00},
      {"What is the largest " + T1 + " id that a " + T2 + " row points at?",
       "SELECT MAX(" + T1 + ".id) FROM " + T1 + " JOIN " + T2 + " ON " + T2 +
           "." + fk2 + " = " + T1 + ".id"},
      {"For each " + T0 + " id, sum the ids of its " + T1 + " rows.",
       "SELECT " + T0 + ".id, SUM(" + T1 + ".id) FROM " + T0 + " JOIN " + T1 +
           " ON " + T1 + "." + fk1 + " = " + T0 + ".id GROUP BY " + T0 +
           ".id"},
      {"List the " + d00 + " of " + T0 + " rows referenced by some " + T1 +
           ".",
       "SELECT " + d00 + " FROM " + T0 + " WHERE id IN (SELECT " + fk1 +
           " FROM " + T1 + ")"},
      {"List every id appearing in " + T1 + " or " + T2 + ".",
       "SELECT id FROM " + T1 + " UNION SELECT id FROM " + T2},
      {"List the " + d00 + " of " + T0 + " rows no " + T1 + " row points at.",
       "SELECT " + d00 + " FROM " + T0 + " WHERE id NOT IN (SELECT " + fk1 +
           " FROM " + T1 + " WHERE " + fk1 + " IS NOT NULL)"},
      {"Which " + T0 + " ids are never used by " + T1 + "?",
       "SELECT id FROM " + T0 + " EXCEPT SELECT " + fk1 + " FROM " + T1},
      {"Show the " + d10 + " of " + T1 + " rows tied to the newest " + T0 +
           ".",
       "SELECT " + d10 + " FROM " + T1 + " WHERE " + fk1 + " = (SELECT " +
           "MAX(id) FROM " + T0 + ")"},
  };
  if (extra)
    qs.push_back({"List the first two ids of " + T0 + ".",
                  "SELECT id FROM " + T0 + " WHERE id BETWEEN 1 AND 2"});
  return qs;
}

std::vector<FixtureQuery> spider_queries(const Database& db) {
  const std::string T0 = db.tables[0].name;
  const std::string d00 = data_col(db, 0, 0);
  return {
      {"List every " + d00 + " in " + T0 + ".",
       "SELECT " + d00 + " FROM " + T0},
      {"How many " + T0 + " rows have an id above 1?",
       "SELECT COUNT(*) FROM " + T0 + " WHERE id > 1"},
  };
}

// ---- replay material -------------------------------------------------------

Database build_reconstruction(const Database& original, const MaskedDump& md,
                              int correct) {
  Database filled = original;
  for (auto& t : filled.tables) t.rows.clear();
  for (size_t i = static_cast<size_t>(correct); i < md.ground_truth.size();
       ++i) {
    const auto& gt = md.ground_truth[i];
    std::string guess = "xx_" + gt.true_name;
    for (auto& t : filled.tables) {
      if (!iequal(t.name, gt.table)) continue;
      t.columns[gt.position].name = guess;
      for (auto& pk : t.primary_key)
        if (iequal(pk, gt.true_name)) pk = guess;
    }
    for (auto& fk : filled.foreign_keys) {
      if (iequal(fk.from_table, gt.table) &&
          iequal(fk.from_column, gt.true_name))
        fk.from_column = guess;
      if (iequal(fk.to_table, gt.table) && iequal(fk.to_column, gt.true_name))
        fk.to_column = guess;
    }
  }
  return filled;
}

std::string interpretation_text(const Database& db, bool atd) {
  std::string text = "The dump creates " + std::to_string(db.tables.size()) +
                     " tables:";
  for (size_t t = 0; t < db.tables.size(); ++t)
    text += (t ? ", " : " ") + db.tables[t].name;
  text += ".";
  if (atd) {
    text += " The tables stand alone, without links between them, and hold "
            "no rows.";
  } else {
    for (const auto& fk : db.foreign_keys)
      text += " Table " + fk.from_table + " references " + fk.to_table +
              " through " + fk.from_column + ".";
    text += " Each table is seeded with a few rows.";
  }
  return text;
}

std::string wrap_prediction(const std::string& sql, size_t index) {
  switch (index % 3) {
    case 0: return "```sql\n" + sql + "\n```";
    case 1: return sql;
    default: return "Here is the translation:\n\n```\n" + sql + "\n```";
  }
}

void record(TranscriptStore& store, const std::vector<Message>& messages,
            const ModelParams& params, const std::string& response) {
  store.append(request_hash(messages, params),
               canonical_request_json(messages, params), response);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

struct BuiltDataset {
  std::vector<Database> dbs;
  std::vector<const DbPlan*> plans;
  json manifest_queries = json::array();
  std::vector<std::pair<std::string, std::string>> queries;  // db, sql
  std::vector<std::string> questions;
};

BuiltDataset emit_dataset(const fs::path& root, const std::string& name,
                          const std::vector<DbPlan>& plans, bool termite) {
  BuiltDataset built;
  json manifest_dbs = json::array();
  for (size_t i = 0; i < plans.size(); ++i) {
    Database model = build_db(plans[i], static_cast<int>(i));
    std::string text = raw_dump(model, static_cast<int>(i));
    write_file(root / name / "dumps" / (plans[i].name + ".sql"), text);
    manifest_dbs.push_back(
        {{"name", plans[i].name}, {"dump", "dumps/" + plans[i].name + ".sql"}});

    // what the toolkit will actually see
    Database parsed = parse_dump(text);
    parsed.name = plans[i].name;
    auto qs = termite ? termite_queries(
                            parsed, plans[i].name == "bowling" ||
                                        plans[i].name == "voli")
                      : spider_queries(parsed);
    for (const auto& q : qs) {
      built.manifest_queries.push_back(
          {{"question", q.question},
           {"sql", q.sql},
           {"database", plans[i].name},
           {"hardness", std::string(hardness_name(classify_query(q.sql)))}});
      built.queries.emplace_back(plans[i].name, q.sql);
      built.questions.push_back(q.question);
    }
    built.dbs.push_back(std::move(parsed));
    built.plans.push_back(&plans[i]);
  }
  json manifest = {
      {"name", name}, {"databases", manifest_dbs},
      {"queries", built.manifest_queries}};
  write_file(root / name / "manifest.json", manifest.dump(2) + "\n");
  return built;
}

std::string predicted_sql(const std::string& db_name, size_t local_index,
                          const Database& db, const std::string& gold) {
  if ((db_name == "coronavirus" || db_name == "recensioni") &&
      local_index == 16)
    return "SELECT DATEDIFF(id, id) FROM " + db.tables[0].name;
  if (local_index == 3 || local_index == 11)
    return "SELECT id FROM " + db.tables[0].name + " WHERE 1 = 0";
  return gold;
}

void emit_replay(const fs::path& path, const BuiltDataset& built,
                 bool with_translations) {
  fs::create_directories(path.parent_path());
  if (fs::exists(path)) fs::remove(path);
  TranscriptStore store;
  store.open_for_append(path.string());
  ModelParams params;

  // DC probes
  for (size_t i = 0; i < built.dbs.size(); ++i) {
    const Database& db = built.dbs[i];
    MaskedDump md = mask_columns(db, {}, kSeed);
    ConversationScript prompt = build_dc_prompt(md);
    Database filled = build_reconstruction(db, md, built.plans[i]->dc_correct);
    record(store, prompt.messages, params, render_dump(filled));
  }
  if (!with_translations) return;

  // interpretations + translations, for original and disconnected dumps
  for (int atd = 0; atd < 2; ++atd) {
    std::map<std::string, std::string> rendered;
    std::map<std::string, std::string> interp;
    for (const auto& db : built.dbs) {
      Database variant = atd ? apply_atd(db) : db;
      rendered[db.name] = render_dump(variant);
      interp[db.name] = interpretation_text(variant, atd);
      record(store, {{Role::User, rendered[db.name]}}, params,
             interp[db.name]);
    }
    std::map<std::string, size_t> local_index;
    for (size_t q = 0; q < built.queries.size(); ++q) {
      const auto& [db_name, gold] = built.queries[q];
      size_t local = local_index[db_name]++;
      const Database* db = nullptr;
      for (const auto& d : built.dbs)
        if (d.name == db_name) db = &d;
      ConversationScript conv = build_translation_conversation(
          rendered[db_name], interp[db_name], built.questions[q]);
      record(store, conv.messages, params,
             wrap_prediction(predicted_sql(db_name, local, *db, gold), q));
    }
  }
}

void emit_tsa_pairs(const fs::path& root) {
  const char* schema =
      "CREATE TABLE city (\n"
      "  id INTEGER PRIMARY KEY,\n"
      "  name TEXT,\n"
      "  pop INTEGER\n"
      ");\n"
      "INSERT INTO city VALUES (1, 'aston', 40), (2, 'brim', 12);\n"
      "CREATE TABLE people (\n"
      "  id INTEGER PRIMARY KEY,\n"
      "  name TEXT,\n"
      "  age INTEGER,\n"
      "  city_id INTEGER REFERENCES city (id)\n"
      ");\n"
      "INSERT INTO people VALUES (1, 'ada', 9, 1), (2, 'bo', 4, 2);\n";
  json pairs = {
      {"equivalent",
       json::array({
           {"SELECT name FROM people WHERE age > 5",
            "SELECT name FROM people WHERE 5 < age"},
           {"SELECT people.name, city.name FROM people JOIN city ON "
            "people.city_id = city.id",
            "SELECT people.name, city.name FROM people, city WHERE "
            "people.city_id = city.id"},
           {"SELECT COUNT(*) FROM people", "SELECT COUNT(id) FROM people"},
           {"SELECT name FROM people WHERE age >= 10",
            "SELECT name FROM people WHERE age > 9"},
           {"SELECT name FROM people WHERE age BETWEEN 3 AND 9",
            "SELECT name FROM people WHERE age >= 3 AND age <= 9"},
           {"SELECT DISTINCT city_id FROM people",
            "SELECT city_id FROM people GROUP BY city_id"},
           {"SELECT name FROM people ORDER BY age ASC",
            "SELECT name FROM people ORDER BY age"},
           {"SELECT name FROM people WHERE age = 4 OR age = 8",
            "SELECT name FROM people WHERE age IN (4, 8)"},
           {"SELECT MAX(age) FROM people",
            "SELECT age FROM people ORDER BY age DESC LIMIT 1"},
           {"SELECT name FROM people WHERE NOT (age > 5)",
            "SELECT name FROM people WHERE age <= 5"},
       })},
      {"inequivalent",
       json::array({
           {"SELECT name FROM people WHERE age > 5",
            "SELECT name FROM people WHERE age >= 5"},
           {"SELECT COUNT(*) FROM people", "SELECT COUNT(age) FROM people"},
           {"SELECT people.name FROM people JOIN city ON people.city_id = "
            "city.id",
            "SELECT people.name FROM people, city"},
           {"SELECT DISTINCT city_id FROM people",
            "SELECT city_id FROM people"},
           {"SELECT name FROM people WHERE age = 4",
            "SELECT name FROM people WHERE age = 6"},
           {"SELECT name FROM people ORDER BY age ASC",
            "SELECT name FROM people ORDER BY age DESC"},
           {"SELECT SUM(age) FROM people", "SELECT AVG(age) FROM people"},
           {"SELECT city_id FROM people UNION SELECT city_id FROM people",
            "SELECT city_id FROM people UNION ALL SELECT city_id FROM "
            "people"},
           {"SELECT name FROM people ORDER BY id LIMIT 2",
            "SELECT name FROM people ORDER BY id LIMIT 3"},
           {"SELECT name FROM people WHERE age = 4",
            "SELECT name FROM people WHERE age != 4"},
       })},
  };
  write_file(root / "tsa_pairs" / "schema.sql", schema);
  write_file(root / "tsa_pairs" / "pairs.json", pairs.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  fs::path root = argc > 1 ? argv[1] : "fixtures";
  try {
    BuiltDataset spider =
        emit_dataset(root, "spider_like", kSpiderPlans, false);
    BuiltDataset termite =
        emit_dataset(root, "termite_like", kTermitePlans, true);
    emit_replay(root / "replay" / "spider_like.jsonl", spider, false);
    emit_replay(root / "replay" / "termite_like.jsonl", termite, true);
    emit_tsa_pairs(root);
    std::cout << "fixtures written to " << root << " (" << spider.dbs.size()
              << " + " << termite.dbs.size() << " databases, "
              << termite.queries.size() << " benchmark queries)\n";
  } catch (const std::exception& e) {
    std::cerr << "fixture generation failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
