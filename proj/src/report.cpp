#include "sqlaudit/report.hpp"

#include <sodium.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sqlaudit/atd.hpp"

namespace sqlaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string stamp_line(const AuditConfig& cfg) {
  return "sqlaudit " + std::string(kToolVersion) + " config=" +
         config_hash(cfg) + " seed=" + std::to_string(cfg.seed);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Mirrors every outgoing request into a JSONL log before forwarding.
class PromptLogTransport : public Transport {
 public:
  PromptLogTransport(Transport& inner, std::vector<std::string>& log)
      : inner_(inner), log_(log) {}
  std::string send(const std::vector<Message>& messages,
                   const ModelParams& params) override {
    log_.push_back(canonical_request_json(messages, params));
    return inner_.send(messages, params);
  }

 private:
  Transport& inner_;
  std::vector<std::string>& log_;
};

struct TranslationOutcome {
  std::vector<Prediction> predictions;
  std::vector<UndecidedItem> failures;  // transport errors
};

TranslationOutcome translate_dataset(const std::vector<Database>& dumps,
                                     const std::vector<QueryRecord>& queries,
                                     Transport& client,
                                     const ModelParams& params,
                                     const std::string& cache_suffix,
                                     InterpretationCache& cache) {
  TranslationOutcome out;
  std::map<std::string, std::string> rendered;
  for (const auto& db : dumps) rendered[to_lower(db.name)] = render_dump(db);

  for (const auto& q : queries) {
    const std::string key = to_lower(q.database_name);
    try {
      const std::string& interp = cache.acquire(
          key + cache_suffix, rendered.at(key), client, params);
      ConversationScript conv = build_translation_conversation(
          rendered.at(key), interp, q.nl_question);
      std::string response = client.send(conv.messages, params);
      out.predictions.emplace_back(q, extract_sql(response));
    } catch (const TransportError& e) {
      out.failures.push_back(
          {q.database_name, q.nl_question, q.gold_sql, "", e.what()});
    }
  }
  return out;
}

}  // namespace

std::string config_hash(const AuditConfig& cfg) {
  json j = {
      {"version", kToolVersion},
      {"manifest", fs::path(cfg.manifest_path).filename().string()},
      {"model", cfg.model.model},
      {"temperature", cfg.model.temperature},
      {"seed", cfg.seed},
      {"tsa_instances", cfg.tsa_instances},
      {"replay", cfg.replay},
  };
  std::string canonical = j.dump();
  unsigned char digest[16];
  crypto_generichash(digest, sizeof digest,
                     reinterpret_cast<const unsigned char*>(canonical.data()),
                     canonical.size(), nullptr, 0);
  char hex[2 * sizeof digest + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return hex;
}

std::string render_fact_sheet_md(const FactSheet& fs, const std::string& name,
                                 const std::string& stamp) {
  std::string out;
  out += "<!-- " + stamp + " -->\n";
  out += "# Dataset fact sheet: " + name + "\n\n";
  out += "| metric | value |\n|---|---|\n";
  out += "| databases | " + std::to_string(fs.db_count) + " |\n";
  out += "| avg tables per DB | " + fixed(fs.avg_tables_per_db, 2) + " |\n";
  out += "| avg columns per table | " + fixed(fs.avg_columns_per_table, 2) +
         " |\n";
  out += "| queries | " + std::to_string(fs.query_count) + " |\n";
  out += "| avg queries per DB | " + fixed(fs.avg_queries_per_db, 2) + " |\n";
  out += "| FK / columns (per-DB avg) | " +
         fixed(fs.avg_fk_per_columns_per_db, 2) + " |\n";
  out += "| compound column names (per-DB avg) | " +
         fixed(fs.avg_compound_per_columns_per_db, 2) + " |\n";
  out += "| abbreviated column names (per-DB avg) | " +
         fixed(fs.avg_abbr_per_columns_per_db, 2) + " |\n";
  return out;
}

std::string render_dc_md(const DCReport& r, const std::string& stamp) {
  std::string out;
  out += "<!-- " + stamp + " -->\n";
  out += "# Masked column reconstruction (DC-accuracy)\n\n";
  out += "mean " + fixed(100.0 * r.mean, 2) + "% | std " +
         fixed(100.0 * r.stddev, 2) + "% | min " + fixed(r.min, 2) +
         " | max " + fixed(r.max, 2) + "\n\n";
  out += "| database | DC-accuracy |\n|---|---|\n";
  for (const auto& [db, acc] : r.per_database)
    out += "| " + db + " | " + fixed(acc, 2) + " |\n";
  if (!r.undecided.empty()) {
    out += "\nundecided (transport failure):";
    for (const auto& db : r.undecided) out += " " + db;
    out += "\n";
  }
  return out;
}

std::string render_dc_csv(const DCReport& r, const std::string& stamp) {
  std::string out = "# " + stamp + "\ndatabase,dc_accuracy\n";
  for (const auto& [db, acc] : r.per_database)
    out += db + "," + fixed(acc, 2) + "\n";
  return out;
}

namespace {

const char* kLevelNames[4] = {"EASY", "MEDIUM", "HARD", "EXTRA_HARD"};

std::string eval_cell(const EvalReport* r, int level) {
  if (!r) return "-";
  return fixed(100.0 * r->mean[level], 2) + " ± " +
         fixed(100.0 * r->stddev[level], 2);
}

std::string overall_cell(const EvalReport* r) {
  if (!r) return "-";
  int correct = 0, decided = 0;
  for (const auto& [db, cells] : r->per_database)
    for (const auto& c : cells) {
      correct += c.correct;
      decided += c.decided;
    }
  if (decided == 0) return "0.00";
  return fixed(100.0 * correct / decided, 2);
}

}  // namespace

std::string render_eval_md(const EvalReport* original, const EvalReport* atd,
                           const std::string& stamp) {
  std::string out;
  out += "<!-- " + stamp + " -->\n";
  out += "# Execution accuracy by hardness\n\n";
  out += "| hardness | original | disconnected |\n|---|---|---|\n";
  for (int level = 0; level < 4; ++level)
    out += "| " + std::string(kLevelNames[level]) + " | " +
           eval_cell(original, level) + " | " + eval_cell(atd, level) + " |\n";
  out += "| ALL (micro) | " + overall_cell(original) + " | " +
         overall_cell(atd) + " |\n";
  auto undecided_line = [&](const char* label, const EvalReport* r) {
    if (!r) return;
    out += "\n" + std::string(label) + ": " +
           std::to_string(r->undecided.size()) + " of " +
           std::to_string(r->total) + " queries undecided\n";
  };
  undecided_line("original", original);
  undecided_line("disconnected", atd);
  return out;
}

std::string render_eval_csv(const EvalReport* original, const EvalReport* atd,
                            const std::string& stamp) {
  std::string out = "# " + stamp +
                    "\ndatabase,hardness,variant,decided,correct,accuracy\n";
  auto emit = [&](const char* variant, const EvalReport* r) {
    if (!r) return;
    for (const auto& [db, cells] : r->per_database)
      for (int level = 0; level < 4; ++level) {
        const EvalCell& c = cells[level];
        if (c.decided == 0) continue;
        out += db + "," + kLevelNames[level] + "," + variant + "," +
               std::to_string(c.decided) + "," + std::to_string(c.correct) +
               "," + fixed(c.accuracy(), 4) + "\n";
      }
  };
  emit("original", original);
  emit("atd", atd);
  return out;
}

AuditResult run_full_audit(const AuditConfig& cfg) {
  AuditResult result;
  const std::string stamp = stamp_line(cfg);
  fs::create_directories(cfg.out_dir);
  fs::path out_dir(cfg.out_dir);

  LoadedDataset dataset;
  try {
    dataset = load_dataset(cfg.manifest_path);
    result.warnings = dataset.warnings;
    result.stages.push_back({"load", true, ""});
  } catch (const std::exception& e) {
    result.stages.push_back({"load", false, e.what()});
    return result;
  }

  // fact sheet needs no transport; run it first
  try {
    Wordlist wl = Wordlist::load(cfg.wordlist_path);
    FactSheet sheet = compute_fact_sheet(dataset.databases, dataset.queries, wl);
    write_file(out_dir / "fact_sheet.md",
               render_fact_sheet_md(sheet, dataset.name, stamp));
    result.stages.push_back({"fact_sheet", true, ""});
  } catch (const std::exception& e) {
    result.stages.push_back({"fact_sheet", false, e.what()});
  }

  std::unique_ptr<Transport> transport;
  try {
    if (cfg.replay) {
      auto store = std::make_shared<TranscriptStore>(
          TranscriptStore::load(cfg.transcript_path));
      transport = std::make_unique<ReplayTransport>(std::move(store));
    } else {
      auto store = std::make_shared<TranscriptStore>();
      store->open_for_append(cfg.transcript_path);
      transport = std::make_unique<RecordTransport>(
          make_http_transport(cfg.http), std::move(store));
    }
    result.stages.push_back({"transport", true, ""});
  } catch (const std::exception& e) {
    result.stages.push_back({"transport", false, e.what()});
    return result;
  }

  try {
    DCReport dc = run_dc_audit(dataset.databases, *transport, cfg.model, {},
                               cfg.seed);
    write_file(out_dir / "dc_report.md", render_dc_md(dc, stamp));
    write_file(out_dir / "dc_per_database.csv", render_dc_csv(dc, stamp));
    bool ok = dc.undecided.empty();
    result.stages.push_back(
        {"dc_probe", ok,
         ok ? "" : std::to_string(dc.undecided.size()) +
                       " databases undecided"});
  } catch (const std::exception& e) {
    result.stages.push_back({"dc_probe", false, e.what()});
  }

  TsaOptions tsa;
  tsa.max_instances = cfg.tsa_instances;
  tsa.base_seed = cfg.seed;
  InterpretationCache cache;
  std::vector<UndecidedItem> review;

  std::optional<EvalReport> eval_original;
  try {
    TranslationOutcome t = translate_dataset(
        dataset.databases, dataset.queries, *transport, cfg.model, "", cache);
    eval_original =
        evaluate_suite(t.predictions, dataset.databases, tsa);
    for (auto item : t.failures) review.push_back(std::move(item));
    bool ok = t.failures.empty();
    result.stages.push_back(
        {"translate_original", ok,
         ok ? "" : std::to_string(t.failures.size()) + " transport failures"});
  } catch (const std::exception& e) {
    result.stages.push_back({"translate_original", false, e.what()});
  }

  std::optional<EvalReport> eval_atd;
  try {
    std::vector<Database> disconnected;
    for (const auto& db : dataset.databases)
      disconnected.push_back(apply_atd(db));
    std::vector<std::string> prompt_log;
    PromptLogTransport logging(*transport, prompt_log);
    TranslationOutcome t = translate_dataset(
        disconnected, dataset.queries, logging, cfg.model, "#atd", cache);
    // scoring still runs against the original schemas
    eval_atd = evaluate_suite(t.predictions, dataset.databases, tsa);
    for (auto item : t.failures) review.push_back(std::move(item));
    std::string log_text;
    for (const auto& line : prompt_log) log_text += line + "\n";
    write_file(out_dir / "atd_prompts.jsonl", log_text);
    bool ok = t.failures.empty();
    result.stages.push_back(
        {"translate_atd", ok,
         ok ? "" : std::to_string(t.failures.size()) + " transport failures"});
  } catch (const std::exception& e) {
    result.stages.push_back({"translate_atd", false, e.what()});
  }

  try {
    write_file(out_dir / "eval_report.md",
               render_eval_md(eval_original ? &*eval_original : nullptr,
                              eval_atd ? &*eval_atd : nullptr, stamp));
    write_file(out_dir / "eval_per_database.csv",
               render_eval_csv(eval_original ? &*eval_original : nullptr,
                               eval_atd ? &*eval_atd : nullptr, stamp));
    std::string review_text;
    auto emit_review = [&](const char* stage,
                           const std::vector<UndecidedItem>& items) {
      for (const auto& item : items) {
        json j = {{"stage", stage},          {"database", item.database},
                  {"question", item.question}, {"gold", item.gold},
                  {"predicted", item.predicted}, {"reason", item.reason}};
        review_text += j.dump() + "\n";
      }
    };
    if (eval_original) emit_review("original", eval_original->undecided);
    if (eval_atd) emit_review("atd", eval_atd->undecided);
    emit_review("transport", review);
    write_file(out_dir / "manual_review.jsonl", review_text);
    result.stages.push_back({"reports", true, ""});
  } catch (const std::exception& e) {
    result.stages.push_back({"reports", false, e.what()});
  }

  return result;
}

}  // namespace sqlaudit
