#include "sqlaudit/contamination.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sqlaudit {

namespace {

uint64_t fnv1a(std::string_view s, uint64_t seed) {
  uint64_t h = 14695981039346656037ULL ^ seed;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Explicit uniform pick; std::uniform_int_distribution is not pinned across
// standard libraries.
size_t pick(std::mt19937_64& rng, size_t bound) { return rng() % bound; }

std::string strip_quotes_and_space(std::string_view s) {
  size_t b = 0, e = s.size();
  auto strippable = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '"' ||
           c == '\'' || c == '`';
  };
  while (b < e && strippable(s[b])) ++b;
  while (e > b && strippable(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

MaskedDump mask_columns(const Database& db, const MaskOptions& options,
                        uint64_t seed) {
  if (db.tables.empty())
    throw std::invalid_argument("cannot mask an empty database");
  if (options.ratio <= 0.0 || options.ratio > 1.0)
    throw std::invalid_argument("mask ratio must be in (0, 1]");

  MaskedDump md;
  md.seed = seed;
  md.database = db;
  // Seeding folds in the database name so dataset ordering is irrelevant.
  std::mt19937_64 rng(fnv1a(db.name, seed));

  for (auto& table : md.database.tables) {
    table.rows.clear();
    std::vector<int> candidates;
    for (size_t i = 0; i < table.columns.size(); ++i) {
      if (options.exclude_pk) {
        bool is_pk = false;
        for (const auto& pk : table.primary_key)
          if (iequal(pk, table.columns[i].name)) is_pk = true;
        if (is_pk) continue;
      }
      candidates.push_back(static_cast<int>(i));
    }
    if (candidates.empty())
      throw std::invalid_argument("table '" + table.name +
                                  "' has no maskable column");
    size_t k = static_cast<size_t>(std::max<long>(
        1, std::lround(options.ratio *
                       static_cast<double>(table.columns.size()))));
    k = std::min(k, candidates.size());
    // Partial Fisher-Yates: the first k entries are the selection.
    for (size_t i = 0; i < k; ++i) {
      size_t j = i + pick(rng, candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
    }
    std::vector<int> chosen(candidates.begin(), candidates.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    for (int idx : chosen) {
      Column& col = table.columns[idx];
      md.ground_truth.push_back({table.name, idx, col.name});
      // Every occurrence of the name is masked, key clauses included;
      // anything less would leak the answer through PRIMARY/FOREIGN KEY.
      for (auto& pk : table.primary_key)
        if (iequal(pk, col.name)) pk = std::string(kMaskToken);
      for (auto& fk : md.database.foreign_keys) {
        if (iequal(fk.from_table, table.name) &&
            iequal(fk.from_column, col.name))
          fk.from_column = std::string(kMaskToken);
        if (iequal(fk.to_table, table.name) && iequal(fk.to_column, col.name))
          fk.to_column = std::string(kMaskToken);
      }
      col.name = std::string(kMaskToken);
      col.masked = true;
    }
  }
  return md;
}

ConversationScript build_dc_prompt(const MaskedDump& md) {
  ConversationScript script;
  script.purpose = ScriptPurpose::DcProbe;
  script.database_name = md.database.name;
  std::string content =
      "In the following SQL dump there are some [MASK] tokens. Reconstruct "
      "the full dump, replacing every [MASK] token with the appropriate "
      "column name. Answer with the complete SQL dump only.\n\n";
  content += render_dump(md.database);
  script.messages.push_back({Role::User, std::move(content)});
  return script;
}

ReconstructionScore score_reconstruction(const MaskedDump& md,
                                         std::string_view reconstruction) {
  ReconstructionScore score;
  score.total = static_cast<int>(md.ground_truth.size());
  Database recon;
  try {
    recon = parse_dump(reconstruction);
  } catch (const ParseError& e) {
    score.parse_failure = e.what();
    return score;
  }
  for (const auto& gt : md.ground_truth) {
    const Table* table = recon.find_table(gt.table);
    if (!table) continue;
    if (gt.position < 0 ||
        static_cast<size_t>(gt.position) >= table->columns.size())
      continue;
    std::string predicted =
        strip_quotes_and_space(table->columns[gt.position].name);
    if (predicted == kMaskToken) continue;
    if (iequal(predicted, strip_quotes_and_space(gt.true_name)))
      ++score.matched;
  }
  if (score.total > 0)
    score.accuracy = static_cast<double>(score.matched) / score.total;
  return score;
}

DCReport run_dc_audit(const std::vector<Database>& dataset, Transport& client,
                      const ModelParams& params, const MaskOptions& options,
                      uint64_t seed) {
  DCReport report;
  for (const auto& db : dataset) {
    MaskedDump md = mask_columns(db, options, seed);
    ConversationScript prompt = build_dc_prompt(md);
    std::string response;
    try {
      response = client.send(prompt.messages, params);
    } catch (const TransportError&) {
      report.undecided.push_back(db.name);
      continue;
    }
    // Models sometimes wrap the dump in a code fence; unwrap before scoring.
    std::string_view body = response;
    std::string unfenced;
    if (response.find("```") != std::string::npos) {
      unfenced = extract_sql(response);
      if (unfenced != kExtractionFailure) body = unfenced;
    }
    report.per_database[db.name] = score_reconstruction(md, body).accuracy;
  }
  if (!report.per_database.empty()) {
    double sum = 0.0, min = 1e9, max = -1e9;
    for (const auto& [name, acc] : report.per_database) {
      sum += acc;
      min = std::min(min, acc);
      max = std::max(max, acc);
    }
    size_t n = report.per_database.size();
    report.mean = sum / n;
    double var = 0.0;
    for (const auto& [name, acc] : report.per_database)
      var += (acc - report.mean) * (acc - report.mean);
    report.stddev = std::sqrt(var / n);
    report.min = min;
    report.max = max;
  }
  return report;
}

}  // namespace sqlaudit
