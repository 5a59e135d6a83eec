#include "sqlaudit/tsa.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sqlaudit/llm.hpp"
#include "sqlaudit/tokenizer.hpp"

namespace sqlaudit {

namespace {

constexpr double kFloatTolerance = 1e-6;

uint64_t mix_seed(uint64_t base, uint64_t index) {
  // splitmix64 step over the combined value
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

size_t pick(std::mt19937_64& rng, size_t bound) { return rng() % bound; }

bool chance(std::mt19937_64& rng, double p) {
  return (rng() % 1000000) < static_cast<uint64_t>(p * 1000000);
}

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

const char* affinity_for(SqlType type) {
  switch (type) {
    case SqlType::Integer: return "INTEGER";
    case SqlType::Real: return "REAL";
    case SqlType::Boolean: return "INTEGER";
    case SqlType::Text:
    case SqlType::Date:
    case SqlType::Other: return "TEXT";
  }
  return "TEXT";
}

// RAII sqlite connection holding the schema of one Database, with per-table
// prepared INSERT statements for fast instance reloads.
class SqliteBackend {
 public:
  explicit SqliteBackend(const Database& schema) : schema_(&schema) {
    if (sqlite3_open(":memory:", &db_) != SQLITE_OK)
      throw ExecutionError("cannot open in-memory database");
    for (const auto& t : schema.tables) {
      std::string ddl = "CREATE TABLE " + quote_ident(t.name) + " (";
      for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i) ddl += ", ";
        ddl += quote_ident(t.columns[i].name);
        ddl += " ";
        ddl += affinity_for(t.columns[i].type);
      }
      ddl += ")";
      exec(ddl);
      std::string ins = "INSERT INTO " + quote_ident(t.name) + " VALUES (";
      for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i) ins += ", ";
        ins += "?";
      }
      ins += ")";
      sqlite3_stmt* stmt = nullptr;
      if (sqlite3_prepare_v2(db_, ins.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
        throw ExecutionError(std::string("prepare failed: ") +
                             sqlite3_errmsg(db_));
      inserts_.push_back(stmt);
    }
  }

  ~SqliteBackend() {
    for (auto* s : inserts_) sqlite3_finalize(s);
    sqlite3_close(db_);
  }

  SqliteBackend(const SqliteBackend&) = delete;
  SqliteBackend& operator=(const SqliteBackend&) = delete;

  void load(const DatabaseInstance& inst) {
    exec("BEGIN");
    for (size_t ti = 0; ti < schema_->tables.size(); ++ti) {
      exec("DELETE FROM " + quote_ident(schema_->tables[ti].name));
      sqlite3_stmt* stmt = inserts_[ti];
      for (const auto& row : inst.rows[ti]) {
        sqlite3_reset(stmt);
        for (size_t ci = 0; ci < row.values.size(); ++ci)
          bind(stmt, static_cast<int>(ci + 1), row.values[ci]);
        if (sqlite3_step(stmt) != SQLITE_DONE)
          throw ExecutionError(std::string("insert failed: ") +
                               sqlite3_errmsg(db_));
      }
    }
    exec("COMMIT");
  }

  sqlite3_stmt* prepare(std::string_view sql) {
    sqlite3_stmt* stmt = nullptr;
    std::string s(sql);
    if (sqlite3_prepare_v2(db_, s.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
      throw ExecutionError(std::string("cannot prepare query: ") +
                           sqlite3_errmsg(db_));
    return stmt;
  }

  std::vector<std::vector<Value>> run(sqlite3_stmt* stmt) {
    sqlite3_reset(stmt);
    std::vector<std::vector<Value>> rows;
    int rc;
    int cols = sqlite3_column_count(stmt);
    while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
      std::vector<Value> row;
      row.reserve(cols);
      for (int c = 0; c < cols; ++c) {
        switch (sqlite3_column_type(stmt, c)) {
          case SQLITE_INTEGER:
            row.emplace_back(
                static_cast<int64_t>(sqlite3_column_int64(stmt, c)));
            break;
          case SQLITE_FLOAT:
            row.emplace_back(sqlite3_column_double(stmt, c));
            break;
          case SQLITE_NULL:
            row.emplace_back(Value{});
            break;
          default: {
            const unsigned char* text = sqlite3_column_text(stmt, c);
            row.emplace_back(std::string(
                text ? reinterpret_cast<const char*>(text) : ""));
            break;
          }
        }
      }
      rows.push_back(std::move(row));
    }
    if (rc != SQLITE_DONE)
      throw ExecutionError(std::string("query failed: ") +
                           sqlite3_errmsg(db_));
    return rows;
  }

  int column_count(sqlite3_stmt* stmt) { return sqlite3_column_count(stmt); }

 private:
  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw ExecutionError("exec failed: " + msg);
    }
  }

  static void bind(sqlite3_stmt* stmt, int idx, const Value& v) {
    struct Visitor {
      sqlite3_stmt* stmt;
      int idx;
      void operator()(std::monostate) const { sqlite3_bind_null(stmt, idx); }
      void operator()(int64_t i) const { sqlite3_bind_int64(stmt, idx, i); }
      void operator()(double d) const { sqlite3_bind_double(stmt, idx, d); }
      void operator()(bool b) const { sqlite3_bind_int(stmt, idx, b ? 1 : 0); }
      void operator()(const std::string& s) const {
        sqlite3_bind_text(stmt, idx, s.data(), static_cast<int>(s.size()),
                          SQLITE_TRANSIENT);
      }
    };
    std::visit(Visitor{stmt, idx}, v);
  }

  const Database* schema_;
  sqlite3* db_ = nullptr;
  std::vector<sqlite3_stmt*> inserts_;
};

struct StatementGuard {
  sqlite3_stmt* stmt = nullptr;
  ~StatementGuard() { sqlite3_finalize(stmt); }
};

// Tables ordered so FK-referenced tables come first; cycles fall back to
// declaration order.
std::vector<size_t> topo_order(const Database& schema) {
  size_t n = schema.tables.size();
  std::vector<std::set<size_t>> deps(n);
  for (const auto& fk : schema.foreign_keys) {
    size_t from = n, to = n;
    for (size_t i = 0; i < n; ++i) {
      if (iequal(schema.tables[i].name, fk.from_table)) from = i;
      if (iequal(schema.tables[i].name, fk.to_table)) to = i;
    }
    if (from < n && to < n && from != to) deps[from].insert(to);
  }
  std::vector<size_t> order;
  std::vector<bool> placed(n, false);
  for (size_t pass = 0; pass < n && order.size() < n; ++pass) {
    for (size_t i = 0; i < n; ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (size_t d : deps[i])
        if (!placed[d]) ready = false;
      if (ready) {
        placed[i] = true;
        order.push_back(i);
      }
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (!placed[i]) order.push_back(i);  // cycle fallback
  return order;
}

std::string pk_key(const Row& row, const std::vector<int>& pk_cols) {
  std::string key;
  for (int c : pk_cols) {
    key += to_sql_literal(row.values[c]);
    key += '|';
  }
  return key;
}

}  // namespace

void ValuePools::harvest_query(std::string_view sql) {
  auto tokens = tokenize_sql(sql);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Number) {
      bool neg = i > 0 && tokens[i - 1].is_punct("-");
      if (t.text.find('.') == std::string::npos &&
          t.text.find_first_of("eE") == std::string::npos) {
        int64_t v = std::stoll(t.text);
        integers.push_back(neg ? -v : v);
        reals.push_back(neg ? -static_cast<double>(v)
                            : static_cast<double>(v));
      } else {
        double v = std::stod(t.text);
        reals.push_back(neg ? -v : v);
      }
    } else if (t.kind == TokenKind::String) {
      texts.push_back(t.text);
    }
  }
}

void ValuePools::harvest_rows(const Database& db) {
  for (const auto& t : db.tables) {
    for (const auto& r : t.rows) {
      for (const auto& v : r.values) {
        if (auto* i = std::get_if<int64_t>(&v)) {
          integers.push_back(*i);
          reals.push_back(static_cast<double>(*i));
        } else if (auto* d = std::get_if<double>(&v)) {
          reals.push_back(*d);
        } else if (auto* s = std::get_if<std::string>(&v)) {
          texts.push_back(*s);
        }
      }
    }
  }
}

DatabaseInstance generate_instance(const Database& schema, uint64_t seed,
                                   const ValuePools& pools,
                                   const InstanceOptions& options) {
  DatabaseInstance inst;
  inst.schema = &schema;
  inst.seed = seed;
  inst.rows.resize(schema.tables.size());
  std::mt19937_64 rng(seed ^ 0x5eed5eed5eed5eedULL);

  // FK source lookup: (table index, column index) -> referenced (table, col).
  auto fk_target = [&](size_t ti, size_t ci)
      -> std::optional<std::pair<size_t, size_t>> {
    const Table& t = schema.tables[ti];
    for (const auto& fk : schema.foreign_keys) {
      if (!iequal(fk.from_table, t.name)) continue;
      if (!iequal(fk.from_column, t.columns[ci].name)) continue;
      for (size_t tj = 0; tj < schema.tables.size(); ++tj) {
        if (!iequal(schema.tables[tj].name, fk.to_table)) continue;
        int cj = schema.tables[tj].column_index(fk.to_column);
        if (cj >= 0) return std::make_pair(tj, static_cast<size_t>(cj));
      }
    }
    return std::nullopt;
  };

  auto random_text = [&]() {
    static const char alphabet[] = "abcde";
    size_t len = 1 + pick(rng, 6);
    std::string s;
    for (size_t i = 0; i < len; ++i) s += alphabet[pick(rng, 5)];
    return s;
  };

  auto random_value = [&](SqlType type) -> Value {
    switch (type) {
      case SqlType::Integer:
        return static_cast<int64_t>(static_cast<int64_t>(pick(rng, 41)) - 10);
      case SqlType::Real:
        return (static_cast<double>(pick(rng, 2001)) - 500.0) / 10.0;
      case SqlType::Boolean:
        return static_cast<int64_t>(pick(rng, 2));
      case SqlType::Date: {
        char buf[16];
        std::snprintf(buf, sizeof buf, "20%02d-%02d-%02d",
                      static_cast<int>(pick(rng, 30)),
                      static_cast<int>(pick(rng, 12)) + 1,
                      static_cast<int>(pick(rng, 28)) + 1);
        return std::string(buf);
      }
      case SqlType::Text:
      case SqlType::Other:
        return random_text();
    }
    return Value{};
  };

  auto pooled_value = [&](SqlType type) -> std::optional<Value> {
    switch (type) {
      case SqlType::Integer:
        if (pools.integers.empty()) return std::nullopt;
        return pools.integers[pick(rng, pools.integers.size())];
      case SqlType::Real:
        if (pools.reals.empty()) return std::nullopt;
        return pools.reals[pick(rng, pools.reals.size())];
      case SqlType::Text:
      case SqlType::Date:
      case SqlType::Other:
        if (pools.texts.empty()) return std::nullopt;
        return pools.texts[pick(rng, pools.texts.size())];
      case SqlType::Boolean:
        return std::nullopt;
    }
    return std::nullopt;
  };

  auto cell = [&](SqlType type) -> Value {
    if (chance(rng, options.pool_probability)) {
      if (auto v = pooled_value(type)) return *v;
    }
    return random_value(type);
  };

  for (size_t ti : topo_order(schema)) {
    const Table& t = schema.tables[ti];
    std::vector<int> pk_cols;
    for (const auto& pk : t.primary_key) {
      int idx = t.column_index(pk);
      if (idx >= 0) pk_cols.push_back(idx);
    }
    int n_rows = options.min_rows +
                 static_cast<int>(pick(
                     rng, static_cast<size_t>(options.max_rows -
                                              options.min_rows + 1)));
    std::set<std::string> seen_pks;
    for (int r = 0; r < n_rows; ++r) {
      Row row;
      row.values.resize(t.columns.size());
      bool ok = false;
      for (int attempt = 0; attempt < options.max_pk_retries && !ok;
           ++attempt) {
        for (size_t ci = 0; ci < t.columns.size(); ++ci) {
          bool is_pk =
              std::find(pk_cols.begin(), pk_cols.end(),
                        static_cast<int>(ci)) != pk_cols.end();
          auto target = fk_target(ti, ci);
          if (target) {
            const auto& ref_rows = inst.rows[target->first];
            if (!ref_rows.empty()) {
              row.values[ci] =
                  ref_rows[pick(rng, ref_rows.size())].values[target->second];
              continue;
            }
          }
          if (!is_pk && !target && chance(rng, options.null_probability)) {
            row.values[ci] = Value{};
            continue;
          }
          row.values[ci] = cell(t.columns[ci].type);
        }
        ok = pk_cols.empty() || seen_pks.insert(pk_key(row, pk_cols)).second;
      }
      if (!ok) {
        // PK space too small for another distinct row; stop early if we have
        // the minimum, otherwise give up.
        if (r >= options.min_rows) break;
        throw std::runtime_error("cannot satisfy PK uniqueness for table '" +
                                 t.name + "'");
      }
      inst.rows[ti].push_back(std::move(row));
    }
  }
  return inst;
}

Denotation execute(std::string_view sql, const DatabaseInstance& inst) {
  SqliteBackend backend(*inst.schema);
  backend.load(inst);
  StatementGuard stmt{backend.prepare(sql)};
  Denotation d;
  d.arity = backend.column_count(stmt.stmt);
  d.rows = backend.run(stmt.stmt);
  d.ordered = has_top_level_order_by(sql);
  return d;
}

namespace {

int type_rank(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return 0;
  if (std::holds_alternative<int64_t>(v) || std::holds_alternative<double>(v) ||
      std::holds_alternative<bool>(v))
    return 1;
  return 2;
}

double numeric_of(const Value& v) {
  if (auto* i = std::get_if<int64_t>(&v)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  return 0.0;
}

bool cell_equal(const Value& a, const Value& b) {
  int ra = type_rank(a), rb = type_rank(b);
  if (ra != rb) return false;
  if (ra == 0) return true;  // NULL equals NULL for denotation identity
  if (ra == 1) return std::fabs(numeric_of(a) - numeric_of(b)) <= kFloatTolerance;
  return std::get<std::string>(a) == std::get<std::string>(b);
}

bool cell_less(const Value& a, const Value& b) {
  int ra = type_rank(a), rb = type_rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 0) return false;
  if (ra == 1) return numeric_of(a) < numeric_of(b);
  return std::get<std::string>(a) < std::get<std::string>(b);
}

bool row_less(const std::vector<Value>& a, const std::vector<Value>& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (cell_less(a[i], b[i])) return true;
    if (cell_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

bool rows_equal_in_order(const std::vector<std::vector<Value>>& a,
                         const std::vector<std::vector<Value>>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (size_t j = 0; j < a[i].size(); ++j)
      if (!cell_equal(a[i][j], b[i][j])) return false;
  }
  return true;
}

}  // namespace

bool denotations_equal(const Denotation& a, const Denotation& b) {
  if (a.arity != b.arity) return false;
  if (a.ordered || b.ordered) return rows_equal_in_order(a.rows, b.rows);
  auto sa = a.rows;
  auto sb = b.rows;
  std::sort(sa.begin(), sa.end(), row_less);
  std::sort(sb.begin(), sb.end(), row_less);
  return rows_equal_in_order(sa, sb);
}

Verdict test_suite_accuracy(std::string_view gold, std::string_view predicted,
                            const Database& schema, const TsaOptions& options) {
  Verdict verdict;
  ValuePools pools;
  try {
    pools.harvest_query(gold);
    pools.harvest_query(predicted);
  } catch (const ParseError& e) {
    verdict.status = VerdictStatus::Undecidable;
    verdict.reason = std::string("unparseable query: ") + e.what();
    return verdict;
  }
  pools.harvest_rows(schema);

  bool gold_ordered, pred_ordered;
  try {
    gold_ordered = has_top_level_order_by(gold);
    pred_ordered = has_top_level_order_by(predicted);
  } catch (const ParseError& e) {
    verdict.status = VerdictStatus::Undecidable;
    verdict.reason = std::string("unparseable query: ") + e.what();
    return verdict;
  }

  try {
    SqliteBackend backend(schema);
    StatementGuard gold_stmt{backend.prepare(gold)};
    StatementGuard pred_stmt{backend.prepare(predicted)};
    for (int i = 0; i < options.max_instances; ++i) {
      uint64_t seed = mix_seed(options.base_seed, static_cast<uint64_t>(i));
      DatabaseInstance inst =
          generate_instance(schema, seed, pools, options.instance);
      backend.load(inst);
      Denotation dg, dp;
      dg.arity = backend.column_count(gold_stmt.stmt);
      dg.rows = backend.run(gold_stmt.stmt);
      dg.ordered = gold_ordered;
      dp.arity = backend.column_count(pred_stmt.stmt);
      dp.rows = backend.run(pred_stmt.stmt);
      dp.ordered = pred_ordered;
      if (!denotations_equal(dg, dp)) {
        verdict.status = VerdictStatus::Incorrect;
        verdict.witness = seed;
        return verdict;
      }
    }
    verdict.status = VerdictStatus::Correct;
  } catch (const ExecutionError& e) {
    verdict.status = VerdictStatus::Undecidable;
    verdict.reason = e.what();
  } catch (const std::runtime_error& e) {
    verdict.status = VerdictStatus::Undecidable;
    verdict.reason = e.what();
  }
  return verdict;
}

EvalReport evaluate_suite(const std::vector<Prediction>& predictions,
                          const std::vector<Database>& dumps,
                          const TsaOptions& options) {
  EvalReport report;
  report.total = static_cast<int>(predictions.size());
  for (const auto& [record, predicted] : predictions) {
    const Database* schema = nullptr;
    for (const auto& db : dumps)
      if (iequal(db.name, record.database_name)) schema = &db;
    size_t level = static_cast<size_t>(record.hardness);
    auto& cells = report.per_database
                      .try_emplace(record.database_name,
                                   std::array<EvalCell, 4>{})
                      .first->second;
    if (!schema) {
      report.undecided.push_back({record.database_name, record.nl_question,
                                  record.gold_sql, predicted,
                                  "unknown database"});
      continue;
    }
    if (predicted.empty() || predicted == kExtractionFailure) {
      // Extraction failures score incorrect, never crash.
      ++cells[level].decided;
      continue;
    }
    Verdict v =
        test_suite_accuracy(record.gold_sql, predicted, *schema, options);
    switch (v.status) {
      case VerdictStatus::Correct:
        ++cells[level].decided;
        ++cells[level].correct;
        break;
      case VerdictStatus::Incorrect:
        ++cells[level].decided;
        break;
      case VerdictStatus::Undecidable:
        report.undecided.push_back({record.database_name, record.nl_question,
                                    record.gold_sql, predicted, v.reason});
        break;
    }
  }
  for (size_t level = 0; level < 4; ++level) {
    std::vector<double> accs;
    for (const auto& [db, cells] : report.per_database)
      if (cells[level].decided > 0) accs.push_back(cells[level].accuracy());
    if (accs.empty()) continue;
    double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / accs.size();
    double var = 0.0;
    for (double a : accs) var += (a - mean) * (a - mean);
    report.mean[level] = mean;
    report.stddev[level] = std::sqrt(var / accs.size());
  }
  return report;
}

}  // namespace sqlaudit
