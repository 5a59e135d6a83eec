#include "sqlaudit/sql_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sqlaudit/tokenizer.hpp"

namespace sqlaudit {

bool iequal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

const Column* Table::find_column(std::string_view name) const {
  for (const auto& c : columns)
    if (iequal(c.name, name)) return &c;
  return nullptr;
}

int Table::column_index(std::string_view name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (iequal(columns[i].name, name)) return static_cast<int>(i);
  return -1;
}

const Table* Database::find_table(std::string_view name) const {
  for (const auto& t : tables)
    if (iequal(t.name, name)) return &t;
  return nullptr;
}

namespace {

struct PendingFk {
  ForeignKey fk;
  int line = 1;
  int column = 1;
  bool to_column_implicit = false;  // REFERENCES t without a column list
};

class DumpParser {
 public:
  DumpParser(std::string_view text, std::vector<std::string>* warnings)
      : tokens_(tokenize_sql(text)), warnings_(warnings) {}

  Database parse() {
    Database db;
    while (!at_end()) {
      if (cur().is_punct(";")) {
        next();
        continue;
      }
      if (cur().is_kw("CREATE") && peek(1).is_kw("TABLE")) {
        parse_create_table(db);
      } else if (cur().is_kw("INSERT")) {
        parse_insert(db);
      } else {
        warn("skipped unsupported statement starting with '" + cur().text +
             "' at line " + std::to_string(cur().line));
        skip_statement();
      }
    }
    resolve_fks(db);
    return db;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(size_t n) const {
    size_t i = pos_ + n;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at_end() const { return cur().kind == TokenKind::End; }
  void next() {
    if (!at_end()) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " (near '" + cur().text + "')", cur().line,
                     cur().column);
  }

  void warn(std::string msg) {
    if (warnings_) warnings_->push_back(std::move(msg));
  }

  void expect_punct(std::string_view p) {
    if (!cur().is_punct(p)) fail("expected '" + std::string(p) + "'");
    next();
  }

  std::string expect_name(const char* what) {
    if (!cur().is_name()) fail(std::string("expected ") + what);
    std::string n = cur().text;
    next();
    return n;
  }

  void skip_statement() {
    while (!at_end() && !cur().is_punct(";")) next();
    if (!at_end()) next();
  }

  void skip_balanced_parens() {
    // cur() is '('; consumes through the matching ')'.
    int depth = 0;
    do {
      if (cur().is_punct("("))
        ++depth;
      else if (cur().is_punct(")"))
        --depth;
      else if (at_end())
        fail("unbalanced parentheses");
      next();
    } while (depth > 0);
  }

  std::vector<std::string> parse_name_list() {
    expect_punct("(");
    std::vector<std::string> names;
    names.push_back(expect_name("identifier"));
    while (cur().is_punct(",")) {
      next();
      names.push_back(expect_name("identifier"));
    }
    expect_punct(")");
    return names;
  }

  static bool is_constraint_start(const Token& t) {
    return t.is_kw("PRIMARY") || t.is_kw("NOT") || t.is_kw("NULL") ||
           t.is_kw("UNIQUE") || t.is_kw("DEFAULT") || t.is_kw("REFERENCES") ||
           t.is_kw("CHECK") || t.is_kw("COLLATE") || t.is_kw("CONSTRAINT") ||
           t.is_kw("AUTOINCREMENT") || t.is_kw("GENERATED");
  }

  void parse_type(Column& col) {
    if (!cur().is_name() || is_constraint_start(cur())) {
      // Typeless column declaration: treated as OTHER with empty raw type.
      col.type = SqlType::Other;
      col.raw_type.clear();
      return;
    }
    std::string raw = cur().text;
    next();
    // Multi-word types (DOUBLE PRECISION, UNSIGNED BIG INT).
    while (cur().kind == TokenKind::Identifier && !is_constraint_start(cur())) {
      raw += " " + cur().text;
      next();
    }
    if (cur().is_punct("(")) {
      raw += "(";
      next();
      while (!cur().is_punct(")")) {
        if (at_end()) fail("unterminated type argument list");
        raw += cur().text;
        if (cur().is_punct(",")) raw += " ";
        next();
      }
      raw += ")";
      next();
    }
    std::string u = to_upper(raw);
    if (u == "INTEGER" || u == "INT") {
      col.type = SqlType::Integer;
      col.raw_type = "INTEGER";
    } else if (u == "REAL" || u == "FLOAT" || u == "DOUBLE" ||
               u == "DOUBLE PRECISION") {
      col.type = SqlType::Real;
      col.raw_type = "REAL";
    } else if (u == "TEXT") {
      col.type = SqlType::Text;
      col.raw_type = "TEXT";
    } else if (u == "DATE") {
      col.type = SqlType::Date;
      col.raw_type = "DATE";
    } else if (u == "BOOLEAN" || u == "BOOL") {
      col.type = SqlType::Boolean;
      col.raw_type = "BOOLEAN";
    } else {
      col.type = SqlType::Other;
      col.raw_type = raw;
    }
  }

  // Parses constraints following a column's type. Returns when ',' or the
  // closing ')' of the column list is reached.
  void parse_column_constraints(Table& table, Column& col) {
    while (!cur().is_punct(",") && !cur().is_punct(")")) {
      if (at_end()) fail("unterminated column definition");
      if (cur().is_kw("PRIMARY")) {
        next();
        if (!cur().is_kw("KEY")) fail("expected KEY after PRIMARY");
        next();
        if (cur().is_kw("ASC") || cur().is_kw("DESC")) next();
        table.primary_key.push_back(col.name);
      } else if (cur().is_kw("AUTOINCREMENT")) {
        col.annotations.push_back("AUTOINCREMENT");
        next();
      } else if (cur().is_kw("NOT")) {
        next();
        if (!cur().is_kw("NULL")) fail("expected NULL after NOT");
        next();
        col.annotations.push_back("NOT NULL");
      } else if (cur().is_kw("NULL")) {
        next();  // explicit NULL-ability, the default; dropped
      } else if (cur().is_kw("UNIQUE")) {
        col.annotations.push_back("UNIQUE");
        next();
      } else if (cur().is_kw("DEFAULT")) {
        next();
        std::string text = "DEFAULT ";
        if (cur().is_punct("(")) {
          size_t start = pos_;
          skip_balanced_parens();
          for (size_t i = start; i < pos_; ++i)
            text += tokens_[i].text;
        } else if (cur().is_punct("-") || cur().is_punct("+")) {
          text += cur().text;
          next();
          text += cur().text;
          next();
        } else if (cur().kind == TokenKind::String) {
          text += "'" + cur().text + "'";
          next();
        } else {
          text += cur().text;
          next();
        }
        col.annotations.push_back(text);
      } else if (cur().is_kw("COLLATE")) {
        next();
        col.annotations.push_back("COLLATE " + expect_name("collation name"));
      } else if (cur().is_kw("CHECK")) {
        next();
        if (!cur().is_punct("(")) fail("expected '(' after CHECK");
        skip_balanced_parens();
        warn("dropped CHECK constraint on column " + col.name);
      } else if (cur().is_kw("REFERENCES")) {
        int line = cur().line, column = cur().column;
        next();
        PendingFk p;
        p.fk.from_table = table.name;
        p.fk.from_column = col.name;
        p.fk.to_table = expect_name("referenced table");
        p.line = line;
        p.column = column;
        if (cur().is_punct("(")) {
          auto cols = parse_name_list();
          if (cols.size() != 1)
            fail("inline REFERENCES expects a single column");
          p.fk.to_column = cols[0];
        } else {
          p.to_column_implicit = true;
        }
        consume_fk_actions();
        pending_fks_.push_back(std::move(p));
      } else {
        fail("unexpected token in column definition");
      }
    }
  }

  void consume_fk_actions() {
    for (;;) {
      if (cur().is_kw("ON")) {
        next();
        if (!cur().is_kw("DELETE") && !cur().is_kw("UPDATE"))
          fail("expected DELETE or UPDATE after ON");
        next();
        if (cur().is_kw("SET") || cur().is_kw("NO")) {
          next();
          next();  // SET NULL / SET DEFAULT / NO ACTION
        } else {
          next();  // CASCADE / RESTRICT
        }
      } else if (cur().is_kw("MATCH")) {
        next();
        next();
      } else if (cur().is_kw("DEFERRABLE") || cur().is_kw("NOT")) {
        // NOT DEFERRABLE [INITIALLY ...]
        while (cur().is_kw("NOT") || cur().is_kw("DEFERRABLE") ||
               cur().is_kw("INITIALLY") || cur().is_kw("DEFERRED") ||
               cur().is_kw("IMMEDIATE"))
          next();
      } else {
        return;
      }
    }
  }

  void parse_table_constraint(Table& table) {
    if (cur().is_kw("CONSTRAINT")) {
      next();
      expect_name("constraint name");
    }
    if (cur().is_kw("PRIMARY")) {
      next();
      if (!cur().is_kw("KEY")) fail("expected KEY after PRIMARY");
      next();
      auto cols = parse_name_list();
      for (auto& c : cols) table.primary_key.push_back(std::move(c));
    } else if (cur().is_kw("FOREIGN")) {
      int line = cur().line, column = cur().column;
      next();
      if (!cur().is_kw("KEY")) fail("expected KEY after FOREIGN");
      next();
      auto from_cols = parse_name_list();
      if (!cur().is_kw("REFERENCES")) fail("expected REFERENCES");
      next();
      std::string to_table = expect_name("referenced table");
      std::vector<std::string> to_cols;
      bool implicit = true;
      if (cur().is_punct("(")) {
        to_cols = parse_name_list();
        implicit = false;
        if (to_cols.size() != from_cols.size())
          fail("FOREIGN KEY column count mismatch");
      }
      consume_fk_actions();
      for (size_t i = 0; i < from_cols.size(); ++i) {
        PendingFk p;
        p.fk.from_table = table.name;
        p.fk.from_column = from_cols[i];
        p.fk.to_table = to_table;
        if (!implicit) p.fk.to_column = to_cols[i];
        p.to_column_implicit = implicit;
        p.line = line;
        p.column = column;
        pending_fks_.push_back(std::move(p));
      }
    } else if (cur().is_kw("UNIQUE")) {
      next();
      if (!cur().is_punct("(")) fail("expected '(' after UNIQUE");
      skip_balanced_parens();
      warn("dropped table-level UNIQUE constraint on " + table.name);
    } else if (cur().is_kw("CHECK")) {
      next();
      if (!cur().is_punct("(")) fail("expected '(' after CHECK");
      skip_balanced_parens();
      warn("dropped table-level CHECK constraint on " + table.name);
    } else {
      fail("unexpected table constraint");
    }
  }

  void parse_create_table(Database& db) {
    next();  // CREATE
    next();  // TABLE
    if (cur().is_kw("IF")) {
      next();
      if (!cur().is_kw("NOT")) fail("expected NOT after IF");
      next();
      if (!cur().is_kw("EXISTS")) fail("expected EXISTS after IF NOT");
      next();
    }
    const Token& name_tok = cur();
    Table table;
    table.name = expect_name("table name");
    if (db.find_table(table.name))
      throw ParseError("duplicate table name '" + table.name + "'",
                       name_tok.line, name_tok.column);
    expect_punct("(");
    for (;;) {
      if (cur().is_kw("PRIMARY") || cur().is_kw("FOREIGN") ||
          cur().is_kw("UNIQUE") || cur().is_kw("CHECK") ||
          cur().is_kw("CONSTRAINT")) {
        parse_table_constraint(table);
      } else {
        const Token& col_tok = cur();
        Column col;
        col.name = expect_name("column name");
        if (col.name.empty())
          throw ParseError("empty column name", col_tok.line, col_tok.column);
        col.masked = (col.name == kMaskToken);
        // Duplicate [MASK] names are legal inside masked dumps.
        if (!col.masked && table.find_column(col.name))
          throw ParseError("duplicate column name '" + col.name +
                               "' in table '" + table.name + "'",
                           col_tok.line, col_tok.column);
        parse_type(col);
        table.columns.push_back(col);
        parse_column_constraints(table, table.columns.back());
      }
      if (cur().is_punct(",")) {
        next();
        continue;
      }
      break;
    }
    expect_punct(")");
    // Trailing options (WITHOUT ROWID, STRICT) are skipped.
    while (!cur().is_punct(";") && !at_end()) next();
    for (const auto& pk : table.primary_key) {
      if (table.column_index(pk) < 0)
        fail("PRIMARY KEY column '" + pk + "' does not exist");
    }
    db.tables.push_back(std::move(table));
  }

  Value parse_value() {
    bool neg = false;
    if (cur().is_punct("-") || cur().is_punct("+")) {
      neg = cur().text == "-";
      next();
    }
    if (cur().kind == TokenKind::Number) {
      const std::string& n = cur().text;
      Value v;
      if (n.find('.') == std::string::npos &&
          n.find_first_of("eE") == std::string::npos) {
        int64_t i = std::stoll(n);
        v = neg ? -i : i;
      } else {
        double d = std::stod(n);
        v = neg ? -d : d;
      }
      next();
      return v;
    }
    if (neg) fail("expected number after sign");
    if (cur().kind == TokenKind::String) {
      Value v = cur().text;
      next();
      return v;
    }
    if (cur().is_kw("NULL")) {
      next();
      return Value{};
    }
    if (cur().is_kw("TRUE") || cur().is_kw("FALSE")) {
      Value v = cur().is_kw("TRUE");
      next();
      return v;
    }
    fail("unexpected token in VALUES");
  }

  void parse_insert(Database& db) {
    const Token& stmt_tok = cur();
    next();  // INSERT
    if (cur().is_kw("OR")) {
      next();
      next();  // OR IGNORE / OR REPLACE ...
    }
    if (!cur().is_kw("INTO")) fail("expected INTO");
    next();
    std::string tname = expect_name("table name");
    Table* table = nullptr;
    for (auto& t : db.tables)
      if (iequal(t.name, tname)) table = &t;
    if (!table)
      throw ParseError("INSERT into unknown table '" + tname + "'",
                       stmt_tok.line, stmt_tok.column);
    std::vector<int> col_map;  // position in tuple -> column index
    if (cur().is_punct("(")) {
      auto cols = parse_name_list();
      for (const auto& c : cols) {
        int idx = table->column_index(c);
        if (idx < 0) fail("INSERT names unknown column '" + c + "'");
        col_map.push_back(idx);
      }
    }
    if (!cur().is_kw("VALUES")) fail("expected VALUES");
    next();
    for (;;) {
      const Token& tuple_tok = cur();
      expect_punct("(");
      std::vector<Value> vals;
      if (!cur().is_punct(")")) {
        vals.push_back(parse_value());
        while (cur().is_punct(",")) {
          next();
          vals.push_back(parse_value());
        }
      }
      expect_punct(")");
      Row row;
      if (col_map.empty()) {
        if (vals.size() != table->columns.size())
          throw ParseError(
              "INSERT arity mismatch for table '" + table->name + "': got " +
                  std::to_string(vals.size()) + " values, expected " +
                  std::to_string(table->columns.size()),
              tuple_tok.line, tuple_tok.column);
        row.values = std::move(vals);
      } else {
        if (vals.size() != col_map.size())
          throw ParseError("INSERT arity mismatch for table '" + table->name +
                               "': got " + std::to_string(vals.size()) +
                               " values for " +
                               std::to_string(col_map.size()) +
                               " named columns",
                           tuple_tok.line, tuple_tok.column);
        row.values.assign(table->columns.size(), Value{});
        for (size_t i = 0; i < col_map.size(); ++i)
          row.values[col_map[i]] = std::move(vals[i]);
      }
      table->rows.push_back(std::move(row));
      if (cur().is_punct(",")) {
        next();
        continue;
      }
      break;
    }
  }

  void resolve_fks(Database& db) {
    for (auto& p : pending_fks_) {
      const Table* from = db.find_table(p.fk.from_table);
      const Table* to = db.find_table(p.fk.to_table);
      if (!to)
        throw ParseError(
            "FOREIGN KEY references unknown table '" + p.fk.to_table + "'",
            p.line, p.column);
      if (!from || from->column_index(p.fk.from_column) < 0)
        throw ParseError("FOREIGN KEY names unknown column '" +
                             p.fk.from_column + "'",
                         p.line, p.column);
      if (p.to_column_implicit) {
        if (to->primary_key.size() != 1)
          throw ParseError("cannot infer referenced column of FK to '" +
                               p.fk.to_table + "'",
                           p.line, p.column);
        p.fk.to_column = to->primary_key[0];
      }
      if (to->column_index(p.fk.to_column) < 0)
        throw ParseError("FOREIGN KEY references unknown column '" +
                             p.fk.to_column + "'",
                         p.line, p.column);
      db.foreign_keys.push_back(p.fk);
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::vector<std::string>* warnings_;
  std::vector<PendingFk> pending_fks_;
};

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

Database parse_dump(std::string_view text, std::vector<std::string>* warnings) {
  DumpParser parser(text, warnings);
  return parser.parse();
}

std::string render_dump(const Database& db) {
  std::string out;
  for (const auto& t : db.tables) {
    out += "CREATE TABLE " + quote_ident(t.name) + " (\n";
    bool first = true;
    for (const auto& c : t.columns) {
      if (!first) out += ",\n";
      first = false;
      out += "  " + quote_ident(c.name);
      if (!c.raw_type.empty()) out += " " + c.raw_type;
      for (const auto& a : c.annotations) out += " " + a;
    }
    if (!t.primary_key.empty()) {
      out += ",\n  PRIMARY KEY (";
      for (size_t i = 0; i < t.primary_key.size(); ++i) {
        if (i) out += ", ";
        out += quote_ident(t.primary_key[i]);
      }
      out += ")";
    }
    for (const auto& fk : db.foreign_keys) {
      if (!iequal(fk.from_table, t.name)) continue;
      out += ",\n  FOREIGN KEY (" + quote_ident(fk.from_column) +
             ") REFERENCES " + quote_ident(fk.to_table) + " (" +
             quote_ident(fk.to_column) + ")";
    }
    out += "\n);\n";
  }
  for (const auto& t : db.tables) {
    for (const auto& r : t.rows) {
      out += "INSERT INTO " + quote_ident(t.name) + " VALUES (";
      for (size_t i = 0; i < r.values.size(); ++i) {
        if (i) out += ", ";
        out += to_sql_literal(r.values[i]);
      }
      out += ");\n";
    }
  }
  if (out.empty()) out = "\n";
  return out;
}

std::vector<Violation> validate(const Database& db) {
  std::vector<Violation> out;
  std::set<std::string> table_names;
  for (const auto& t : db.tables) {
    if (!table_names.insert(to_lower(t.name)).second)
      out.push_back({t.name, "duplicate table name"});
    std::set<std::string> col_names;
    for (const auto& c : t.columns) {
      if (c.name.empty()) out.push_back({t.name, "empty column name"});
      if (c.masked && c.name != kMaskToken)
        out.push_back({t.name + "." + c.name,
                       "masked column must bear the mask token"});
      if (c.name != kMaskToken && !col_names.insert(to_lower(c.name)).second)
        out.push_back({t.name + "." + c.name, "duplicate column name"});
    }
    for (const auto& pk : t.primary_key) {
      if (t.column_index(pk) < 0)
        out.push_back({t.name + "." + pk, "PRIMARY KEY column does not exist"});
    }
    for (size_t i = 0; i < t.rows.size(); ++i) {
      if (t.rows[i].values.size() != t.columns.size())
        out.push_back({t.name + " row " + std::to_string(i),
                       "row arity does not match column count"});
    }
  }
  for (const auto& fk : db.foreign_keys) {
    const Table* from = db.find_table(fk.from_table);
    const Table* to = db.find_table(fk.to_table);
    std::string desc = "FK " + fk.from_table + "." + fk.from_column + " -> " +
                       fk.to_table + "." + fk.to_column;
    if (!from || from->column_index(fk.from_column) < 0)
      out.push_back({desc, "FK source does not resolve"});
    if (!to || to->column_index(fk.to_column) < 0)
      out.push_back({desc, "FK target does not resolve"});
  }
  return out;
}

bool structurally_equal(const Database& a, const Database& b) {
  auto col_eq = [](const Column& x, const Column& y) {
    return x.name == y.name && x.type == y.type && x.raw_type == y.raw_type &&
           x.annotations == y.annotations && x.masked == y.masked;
  };
  if (a.tables.size() != b.tables.size()) return false;
  if (a.foreign_keys.size() != b.foreign_keys.size()) return false;
  for (size_t i = 0; i < a.tables.size(); ++i) {
    const Table& x = a.tables[i];
    const Table& y = b.tables[i];
    if (x.name != y.name || x.primary_key != y.primary_key) return false;
    if (x.columns.size() != y.columns.size()) return false;
    for (size_t j = 0; j < x.columns.size(); ++j)
      if (!col_eq(x.columns[j], y.columns[j])) return false;
    if (x.rows.size() != y.rows.size()) return false;
    for (size_t j = 0; j < x.rows.size(); ++j)
      if (x.rows[j].values != y.rows[j].values) return false;
  }
  for (size_t i = 0; i < a.foreign_keys.size(); ++i) {
    const ForeignKey& x = a.foreign_keys[i];
    const ForeignKey& y = b.foreign_keys[i];
    if (x.from_table != y.from_table || x.from_column != y.from_column ||
        x.to_table != y.to_table || x.to_column != y.to_column)
      return false;
  }
  return true;
}

}  // namespace sqlaudit
