#include "sqlaudit/hardness.hpp"

#include <set>

#include "sqlaudit/tokenizer.hpp"

namespace sqlaudit {

std::string_view hardness_name(HardnessLevel level) {
  switch (level) {
    case HardnessLevel::Easy: return "EASY";
    case HardnessLevel::Medium: return "MEDIUM";
    case HardnessLevel::Hard: return "HARD";
    case HardnessLevel::ExtraHard: return "EXTRA_HARD";
  }
  return "EASY";
}

std::optional<HardnessLevel> hardness_from_name(std::string_view name) {
  std::string u = to_upper(name);
  for (auto& c : u)
    if (c == '-' || c == ' ') c = '_';
  if (u == "EASY") return HardnessLevel::Easy;
  if (u == "MEDIUM") return HardnessLevel::Medium;
  if (u == "HARD") return HardnessLevel::Hard;
  if (u == "EXTRA_HARD" || u == "EXTRA") return HardnessLevel::ExtraHard;
  return std::nullopt;
}

namespace {

bool is_clause_kw(const Token& t) {
  return t.is_kw("WHERE") || t.is_kw("GROUP") || t.is_kw("HAVING") ||
         t.is_kw("ORDER") || t.is_kw("LIMIT") || t.is_kw("UNION") ||
         t.is_kw("INTERSECT") || t.is_kw("EXCEPT");
}

bool is_agg_fn(const Token& t) {
  return t.is_kw("COUNT") || t.is_kw("SUM") || t.is_kw("AVG") ||
         t.is_kw("MIN") || t.is_kw("MAX");
}

}  // namespace

QueryFeatures extract_features(std::string_view sql, const Database* schema) {
  auto tokens = tokenize_sql(sql);
  if (tokens.empty() || !tokens[0].is_kw("SELECT"))
    throw ParseError("expected a SELECT statement", tokens.empty() ? 1 : tokens[0].line,
                     tokens.empty() ? 1 : tokens[0].column);

  QueryFeatures f;
  std::set<std::string> tables;

  struct FromCtx {
    int depth;
    bool expect_table = true;
  };
  struct WhereCtx {
    int depth;
    bool between_pending = false;
  };
  std::vector<FromCtx> from_stack;
  std::vector<WhereCtx> where_stack;
  int depth = 0;

  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& t = tokens[i];

    if (t.is_punct("(")) {
      ++depth;
      if (!from_stack.empty() && from_stack.back().expect_table &&
          from_stack.back().depth == depth - 1)
        from_stack.back().expect_table = false;  // derived table
      continue;
    }
    if (t.is_punct(")")) {
      --depth;
      while (!from_stack.empty() && from_stack.back().depth > depth)
        from_stack.pop_back();
      while (!where_stack.empty() && where_stack.back().depth > depth)
        where_stack.pop_back();
      continue;
    }

    if (is_clause_kw(t)) {
      // A clause keyword at a context's depth closes that context.
      if (!from_stack.empty() && from_stack.back().depth == depth)
        from_stack.pop_back();
      if (!where_stack.empty() && where_stack.back().depth == depth &&
          !t.is_kw("WHERE"))
        where_stack.pop_back();
    }

    if (t.is_kw("SELECT") && depth > 0) f.has_nesting = true;
    if (t.is_kw("UNION") || t.is_kw("INTERSECT") || t.is_kw("EXCEPT"))
      f.has_setop = true;
    if (t.is_kw("ORDER") && depth == 0) f.has_order_by = true;

    if (is_agg_fn(t) && tokens[i + 1].is_punct("(")) ++f.agg_count;

    if (t.is_kw("FROM")) {
      from_stack.push_back({depth, true});
      continue;
    }
    if (t.is_kw("JOIN")) {
      ++f.join_count;
      if (!from_stack.empty() && from_stack.back().depth == depth)
        from_stack.back().expect_table = true;
      continue;
    }
    if (t.is_kw("WHERE")) {
      where_stack.push_back({depth, false});
      ++f.where_pred_count;
      continue;
    }
    if (t.is_kw("BETWEEN") && !where_stack.empty() &&
        where_stack.back().depth == depth) {
      where_stack.back().between_pending = true;
      continue;
    }
    if ((t.is_kw("AND") || t.is_kw("OR")) && !where_stack.empty() &&
        where_stack.back().depth == depth) {
      if (t.is_kw("AND") && where_stack.back().between_pending)
        where_stack.back().between_pending = false;  // BETWEEN lo AND hi
      else
        ++f.where_pred_count;
      continue;
    }

    if (!from_stack.empty() && from_stack.back().depth == depth) {
      FromCtx& fc = from_stack.back();
      if (t.is_punct(",")) {
        ++f.join_count;  // implicit comma-join
        fc.expect_table = true;
        continue;
      }
      if (fc.expect_table && t.is_name()) {
        tables.insert(to_lower(t.text));
        fc.expect_table = false;
        continue;
      }
    }
  }

  f.table_count = static_cast<int>(tables.size());
  if (f.table_count == 0)
    throw ParseError("SELECT without FROM clause", 1, 1);

  if (schema) {
    for (const auto& name : tables) {
      // Unknown table references are tolerated (aliases to subqueries are
      // indistinguishable without full parsing), but the count stays honest.
      (void)schema->find_table(name);
    }
  }
  return f;
}

HardnessLevel classify(const QueryFeatures& f) {
  if (f.has_nesting || f.has_setop) return HardnessLevel::ExtraHard;
  if (f.join_count + f.agg_count >= 2 && f.table_count >= 2)
    return HardnessLevel::Hard;
  if (f.table_count >= 2 ||
      (f.table_count == 1 && f.agg_count + f.where_pred_count >= 2))
    return HardnessLevel::Medium;
  return HardnessLevel::Easy;
}

HardnessLevel classify_query(std::string_view sql, const Database* schema) {
  return classify(extract_features(sql, schema));
}

HardnessHistogram hardness_histogram(const std::vector<QueryRecord>& records) {
  HardnessHistogram h;
  for (const auto& r : records) {
    size_t level = static_cast<size_t>(r.hardness);
    auto [it, inserted] =
        h.per_database.try_emplace(r.database_name, std::array<int, 4>{});
    ++it->second[level];
    ++h.totals[level];
  }
  return h;
}

bool has_top_level_order_by(std::string_view sql) {
  auto tokens = tokenize_sql(sql);
  int depth = 0;
  for (const auto& t : tokens) {
    if (t.is_punct("("))
      ++depth;
    else if (t.is_punct(")"))
      --depth;
    else if (t.is_kw("ORDER") && depth == 0)
      return true;
  }
  return false;
}

}  // namespace sqlaudit
