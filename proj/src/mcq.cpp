#include "sqlaudit/mcq.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "sqlaudit/tokenizer.hpp"

namespace sqlaudit {

namespace {

size_t pick(std::mt19937_64& rng, size_t bound) { return rng() % bound; }

std::string token_to_sql(const Token& t) {
  switch (t.kind) {
    case TokenKind::String: {
      std::string out = "'";
      for (char c : t.text) {
        out += c;
        if (c == '\'') out += '\'';
      }
      return out + "'";
    }
    case TokenKind::QuotedIdentifier: {
      std::string out = "\"";
      for (char c : t.text) {
        out += c;
        if (c == '"') out += '"';
      }
      return out + "\"";
    }
    default:
      return t.text;
  }
}

std::string render_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::End) break;
    if (!out.empty()) {
      // no space before punctuation that binds tightly
      if (!(t.is_punct(",") || t.is_punct(")") || t.is_punct(";") ||
            t.is_punct(".") || out.back() == '.' || out.back() == '('))
        out += ' ';
    }
    out += token_to_sql(t);
  }
  return out;
}

bool parses_as_select(const std::string& sql) {
  try {
    extract_features(sql);
    return true;
  } catch (...) {
    return false;
  }
}

bool is_agg_fn(const Token& t) {
  return t.is_kw("COUNT") || t.is_kw("SUM") || t.is_kw("AVG") ||
         t.is_kw("MIN") || t.is_kw("MAX");
}

bool is_clause_kw(const Token& t) {
  return t.is_kw("GROUP") || t.is_kw("HAVING") || t.is_kw("ORDER") ||
         t.is_kw("LIMIT") || t.is_kw("UNION") || t.is_kw("INTERSECT") ||
         t.is_kw("EXCEPT") || t.is_kw("WHERE");
}

// ---- individual perturbation operators; each returns nullopt when it does
// not apply to the query.

std::optional<std::string> drop_where_predicate(std::vector<Token> tokens) {
  int depth = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].is_punct("(")) ++depth;
    if (tokens[i].is_punct(")")) --depth;
    if (!tokens[i].is_kw("WHERE")) continue;
    int clause_depth = depth;
    // find clause end
    size_t end = i + 1;
    int d = depth;
    for (; end < tokens.size() && tokens[end].kind != TokenKind::End; ++end) {
      if (tokens[end].is_punct("(")) ++d;
      if (tokens[end].is_punct(")")) {
        --d;
        if (d < clause_depth) break;
      }
      if (d == clause_depth && is_clause_kw(tokens[end]) &&
          !tokens[end].is_kw("WHERE"))
        break;
      if (tokens[end].is_punct(";")) break;
    }
    // first connective at clause depth, if any
    size_t connective = 0;
    int d2 = clause_depth;
    bool between = false;
    for (size_t j = i + 1; j < end; ++j) {
      if (tokens[j].is_punct("(")) ++d2;
      if (tokens[j].is_punct(")")) --d2;
      if (d2 != clause_depth) continue;
      if (tokens[j].is_kw("BETWEEN")) between = true;
      if (tokens[j].is_kw("AND") && between) {
        between = false;
        continue;
      }
      if (tokens[j].is_kw("AND") || tokens[j].is_kw("OR")) {
        connective = j;
        break;
      }
    }
    if (connective > 0) {
      tokens.erase(tokens.begin() + i + 1, tokens.begin() + connective + 1);
    } else {
      tokens.erase(tokens.begin() + i, tokens.begin() + end);
    }
    return render_tokens(tokens);
  }
  return std::nullopt;
}

std::optional<std::string> swap_aggregate(std::vector<Token> tokens,
                                          std::mt19937_64& rng) {
  static const char* kAggs[] = {"COUNT", "SUM", "AVG", "MIN", "MAX"};
  for (size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (!is_agg_fn(tokens[i]) || !tokens[i + 1].is_punct("(")) continue;
    if (tokens[i + 2].is_punct("*")) continue;  // COUNT(*) has no typed swap
    std::string current = tokens[i].upper;
    std::string replacement;
    do {
      replacement = kAggs[pick(rng, 5)];
    } while (replacement == current);
    tokens[i].text = replacement;
    tokens[i].upper = replacement;
    return render_tokens(tokens);
  }
  return std::nullopt;
}

std::optional<std::string> replace_selected_column(std::vector<Token> tokens,
                                                   const Database& schema,
                                                   std::mt19937_64& rng) {
  // scan the select list of the outermost query
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].is_kw("FROM")) break;
    if (!tokens[i].is_name() || is_agg_fn(tokens[i]) ||
        tokens[i].is_kw("DISTINCT") || tokens[i].is_kw("AS") ||
        tokens[i].is_kw("SELECT"))
      continue;
    // skip qualifiers: t.col -> operate on col
    if (i + 1 < tokens.size() && tokens[i + 1].is_punct(".")) continue;
    for (const auto& table : schema.tables) {
      if (table.column_index(tokens[i].text) < 0) continue;
      std::vector<const Column*> others;
      for (const auto& c : table.columns)
        if (!iequal(c.name, tokens[i].text)) others.push_back(&c);
      if (others.empty()) continue;
      const Column* replacement = others[pick(rng, others.size())];
      tokens[i].text = replacement->name;
      tokens[i].kind = TokenKind::QuotedIdentifier;
      return render_tokens(tokens);
    }
  }
  return std::nullopt;
}

std::optional<std::string> rename_table(std::vector<Token> tokens,
                                        const Database& schema,
                                        std::mt19937_64& rng) {
  if (schema.tables.size() < 2) return std::nullopt;
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (!(tokens[i - 1].is_kw("FROM") || tokens[i - 1].is_kw("JOIN"))) continue;
    if (!tokens[i].is_name()) continue;
    if (!schema.find_table(tokens[i].text)) continue;
    std::vector<const Table*> others;
    for (const auto& t : schema.tables)
      if (!iequal(t.name, tokens[i].text)) others.push_back(&t);
    if (others.empty()) continue;
    const Table* replacement = others[pick(rng, others.size())];
    std::string original = tokens[i].text;
    // rename every reference to keep the query internally consistent
    for (auto& t : tokens)
      if (t.is_name() && iequal(t.text, original)) {
        t.text = replacement->name;
        t.kind = TokenKind::QuotedIdentifier;
      }
    return render_tokens(tokens);
  }
  return std::nullopt;
}

}  // namespace

std::string perturb_query(std::string_view gold, const Database& schema,
                          uint64_t seed) {
  auto tokens = tokenize_sql(gold);
  std::mt19937_64 rng(seed ^ 0x9c0de5eedULL);
  size_t first = pick(rng, 4);
  for (size_t k = 0; k < 4; ++k) {
    size_t op = (first + k) % 4;
    std::optional<std::string> out;
    switch (op) {
      case 0: out = drop_where_predicate(tokens); break;
      case 1: out = swap_aggregate(tokens, rng); break;
      case 2: out = replace_selected_column(tokens, schema, rng); break;
      case 3: out = rename_table(tokens, schema, rng); break;
    }
    if (out && *out != gold && parses_as_select(*out)) return *out;
  }
  throw std::runtime_error("no applicable perturbation for query: " +
                           std::string(gold));
}

namespace {

std::map<std::string, int> bow_vector(std::string_view q) {
  std::map<std::string, int> counts;
  std::string cur;
  for (char c : q) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      ++counts[cur];
      cur.clear();
    }
  }
  if (!cur.empty()) ++counts[cur];
  return counts;
}

}  // namespace

double bow_cosine(std::string_view q1, std::string_view q2) {
  auto v1 = bow_vector(q1);
  auto v2 = bow_vector(q2);
  if (v1.empty() || v2.empty()) return 0.0;
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (const auto& [tok, c] : v1) {
    n1 += static_cast<double>(c) * c;
    auto it = v2.find(tok);
    if (it != v2.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [tok, c] : v2) n2 += static_cast<double>(c) * c;
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return dot / (std::sqrt(n1) * std::sqrt(n2));
}

size_t nearest_query_index(std::string_view gold,
                           const std::vector<std::string>& pool) {
  if (pool.empty()) throw std::invalid_argument("empty distractor pool");
  size_t best = 0;
  double best_sim = -1.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    double sim = bow_cosine(gold, pool[i]);
    if (sim > best_sim) {
      best_sim = sim;
      best = i;
    }
  }
  return best;
}

std::string nearest_query(std::string_view gold,
                          const std::vector<std::string>& pool) {
  return pool[nearest_query_index(gold, pool)];
}

std::vector<MCQItem> build_test(const std::vector<QueryRecord>& dataset,
                                const std::vector<Database>& dumps,
                                size_t n_items, uint64_t seed) {
  if (dataset.size() < n_items)
    throw std::invalid_argument("dataset smaller than requested item count");
  std::mt19937_64 rng(seed ^ 0x3c9f2b1a77ULL);
  std::vector<size_t> order(dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    size_t j = i + pick(rng, order.size() - i);
    std::swap(order[i], order[j]);
  }

  std::vector<MCQItem> items;
  for (size_t k = 0; k < n_items; ++k) {
    const QueryRecord& record = dataset[order[k]];
    const Database* schema = nullptr;
    for (const auto& db : dumps)
      if (iequal(db.name, record.database_name)) schema = &db;
    if (!schema)
      throw std::runtime_error("no schema for database " +
                               record.database_name);
    std::string perturbed;
    try {
      perturbed = perturb_query(record.gold_sql, *schema, rng());
    } catch (const std::exception& e) {
      throw std::runtime_error("item generation failed for query '" +
                               record.gold_sql + "': " + e.what());
    }

    // pool: all other queries in the dataset, minus duplicates of the gold
    std::vector<std::string> pool;
    for (size_t i = 0; i < dataset.size(); ++i) {
      if (i == order[k]) continue;
      if (dataset[i].gold_sql == record.gold_sql) continue;
      if (dataset[i].gold_sql == perturbed) continue;
      pool.push_back(dataset[i].gold_sql);
    }
    if (pool.empty())
      throw std::runtime_error("item generation failed for query '" +
                               record.gold_sql + "': empty distractor pool");
    std::string nearest = nearest_query(record.gold_sql, pool);

    MCQItem item;
    item.nl_question = record.nl_question;
    item.schema_ref = record.database_name;
    std::array<std::pair<std::string, std::optional<DistractorKind>>, 3>
        slots = {{{record.gold_sql, std::nullopt},
                  {perturbed, DistractorKind::Perturbed},
                  {nearest, DistractorKind::BowNearest}}};
    for (size_t i = 0; i + 1 < 3; ++i) {
      size_t j = i + pick(rng, 3 - i);
      std::swap(slots[i], slots[j]);
    }
    for (size_t i = 0; i < 3; ++i) {
      item.options[i] = slots[i].first;
      item.distractor_kinds[i] = slots[i].second;
      if (!slots[i].second) item.answer_index = static_cast<int>(i);
    }
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j)
        if (item.options[i] == item.options[j])
          throw std::runtime_error("item generation failed for query '" +
                                   record.gold_sql +
                                   "': duplicate options");
    for (const auto& opt : item.options)
      if (!parses_as_select(opt))
        throw std::runtime_error("item generation failed for query '" +
                                 record.gold_sql +
                                 "': option does not parse: " + opt);
    items.push_back(std::move(item));
  }
  return items;
}

AnnotationScores score_annotations(const AnnotationMatrix& m,
                                   const std::vector<int>& answer_key) {
  size_t n_items = m.items();
  size_t n_annotators = m.annotators();
  if (n_annotators < 2 || n_items < 1)
    throw std::invalid_argument("need >= 2 annotators and >= 1 item");
  if (answer_key.size() != n_items)
    throw std::invalid_argument("answer key length mismatch");

  AnnotationScores scores;
  scores.per_annotator_accuracy.assign(n_annotators, 0.0);
  int majority_correct = 0;
  std::array<double, 3> marginal{};
  double p_bar_sum = 0.0;

  for (size_t i = 0; i < n_items; ++i) {
    if (m.choices[i].size() != n_annotators)
      throw std::invalid_argument("ragged annotation matrix");
    std::array<int, 3> counts{};
    for (size_t a = 0; a < n_annotators; ++a) {
      int c = m.choices[i][a];
      if (c < 0 || c > 2)
        throw std::invalid_argument("annotation out of range");
      ++counts[c];
      if (c == answer_key[i]) scores.per_annotator_accuracy[a] += 1.0;
    }
    int best = std::max({counts[0], counts[1], counts[2]});
    bool tie = (counts[0] == best) + (counts[1] == best) +
                   (counts[2] == best) > 1;
    if (!tie && counts[answer_key[i]] == best) ++majority_correct;
    double agree = 0.0;
    for (int c : counts) agree += static_cast<double>(c) * (c - 1);
    p_bar_sum += agree / (static_cast<double>(n_annotators) *
                          (n_annotators - 1));
    for (int k = 0; k < 3; ++k)
      marginal[k] += static_cast<double>(counts[k]) /
                     (static_cast<double>(n_items) * n_annotators);
  }

  for (auto& acc : scores.per_annotator_accuracy) acc /= n_items;
  scores.majority_accuracy = static_cast<double>(majority_correct) / n_items;

  double p_bar = p_bar_sum / n_items;
  double p_e = 0.0;
  for (double p : marginal) p_e += p * p;
  if (1.0 - p_e < 1e-12) {
    // all mass on one category: chance-agreement saturates
    scores.fleiss_kappa = 1.0;
    scores.note = "degenerate kappa: zero marginal variance";
  } else {
    scores.fleiss_kappa = (p_bar - p_e) / (1.0 - p_e);
  }
  return scores;
}

}  // namespace sqlaudit
