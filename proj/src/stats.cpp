#include "sqlaudit/stats.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace sqlaudit {

Wordlist Wordlist::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open wordlist: " + path);
  Wordlist wl;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    wl.words.insert(to_lower(line));
  }
  return wl;
}

bool Wordlist::contains(std::string_view word) const {
  return words.count(to_lower(word)) > 0;
}

std::vector<std::string> split_name_tokens(std::string_view name) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (c == '_' || c == ' ' || c == '-') {
      flush();
      continue;
    }
    bool boundary = false;
    if (!cur.empty()) {
      char prev = cur.back();
      bool prev_lower = std::islower(static_cast<unsigned char>(prev));
      bool prev_alpha = std::isalpha(static_cast<unsigned char>(prev));
      bool prev_digit = std::isdigit(static_cast<unsigned char>(prev));
      bool c_upper = std::isupper(static_cast<unsigned char>(c));
      bool c_digit = std::isdigit(static_cast<unsigned char>(c));
      bool c_alpha = std::isalpha(static_cast<unsigned char>(c));
      if (prev_lower && c_upper) boundary = true;            // aB
      if (prev_alpha && c_digit) boundary = true;            // a1
      if (prev_digit && c_alpha) boundary = true;            // 1a
      // ABCd -> AB, Cd (acronym followed by a capitalized word)
      if (!boundary && c_upper && i + 1 < name.size() &&
          std::isupper(static_cast<unsigned char>(prev)) &&
          std::islower(static_cast<unsigned char>(name[i + 1])))
        boundary = true;
    }
    if (boundary) flush();
    cur += c;
  }
  flush();
  return tokens;
}

NameClass classify_column_name(std::string_view name,
                               const Wordlist& wordlist) {
  NameClass nc;
  auto tokens = split_name_tokens(name);
  nc.is_compound = tokens.size() >= 2;
  for (const auto& tok : tokens) {
    if (static_cast<int>(tok.size()) <= wordlist.max_abbr_length &&
        !wordlist.contains(tok)) {
      nc.is_abbreviation = true;
      break;
    }
  }
  return nc;
}

std::vector<PerDatabaseNameRatios> per_database_name_ratios(
    const std::vector<Database>& dumps, const Wordlist& wordlist) {
  std::vector<PerDatabaseNameRatios> out;
  for (const auto& db : dumps) {
    int columns = 0, compound = 0, abbr = 0;
    for (const auto& t : db.tables) {
      for (const auto& c : t.columns) {
        ++columns;
        NameClass nc = classify_column_name(c.name, wordlist);
        if (nc.is_compound) ++compound;
        if (nc.is_abbreviation) ++abbr;
      }
    }
    PerDatabaseNameRatios r;
    r.database = db.name;
    if (columns > 0) {
      r.compound = static_cast<double>(compound) / columns;
      r.abbreviation = static_cast<double>(abbr) / columns;
    }
    out.push_back(r);
  }
  return out;
}

FactSheet compute_fact_sheet(const std::vector<Database>& dumps,
                             const std::vector<QueryRecord>& manifest,
                             const Wordlist& wordlist) {
  FactSheet fs;
  fs.db_count = static_cast<int>(dumps.size());
  fs.query_count = static_cast<int>(manifest.size());
  for (const auto& q : manifest) {
    bool found = false;
    for (const auto& db : dumps)
      if (iequal(db.name, q.database_name)) found = true;
    if (!found)
      throw std::invalid_argument("query references unknown database '" +
                                  q.database_name + "'");
  }
  if (fs.db_count == 0) return fs;

  int total_tables = 0, total_columns = 0;
  double fk_ratio_sum = 0.0, compound_sum = 0.0, abbr_sum = 0.0;
  auto ratios = per_database_name_ratios(dumps, wordlist);
  for (size_t i = 0; i < dumps.size(); ++i) {
    const Database& db = dumps[i];
    int db_columns = 0;
    for (const auto& t : db.tables) db_columns += static_cast<int>(t.columns.size());
    total_tables += static_cast<int>(db.tables.size());
    total_columns += db_columns;
    if (db_columns > 0)
      fk_ratio_sum +=
          static_cast<double>(db.foreign_keys.size()) / db_columns;
    compound_sum += ratios[i].compound;
    abbr_sum += ratios[i].abbreviation;
  }
  fs.avg_tables_per_db = static_cast<double>(total_tables) / fs.db_count;
  if (total_tables > 0)
    fs.avg_columns_per_table =
        static_cast<double>(total_columns) / total_tables;
  fs.avg_queries_per_db = static_cast<double>(fs.query_count) / fs.db_count;
  fs.avg_fk_per_columns_per_db = fk_ratio_sum / fs.db_count;
  fs.avg_compound_per_columns_per_db = compound_sum / fs.db_count;
  fs.avg_abbr_per_columns_per_db = abbr_sum / fs.db_count;
  return fs;
}

}  // namespace sqlaudit
