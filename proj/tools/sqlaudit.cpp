// Command-line front end: wires dataset loading, the audit stages and the
// report emitters into subcommands. See README.md for the config file format.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqlaudit/atd.hpp"
#include "sqlaudit/contamination.hpp"
#include "sqlaudit/hardness.hpp"
#include "sqlaudit/llm.hpp"
#include "sqlaudit/manifest.hpp"
#include "sqlaudit/mcq.hpp"
#include "sqlaudit/packaging.hpp"
#include "sqlaudit/report.hpp"
#include "sqlaudit/sql_model.hpp"
#include "sqlaudit/stats.hpp"
#include "sqlaudit/tsa.hpp"

using nlohmann::json;
using namespace sqlaudit;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
  std::string config_path;
  uint64_t seed = 42;
  std::string replay_path;
  std::string record_path;
};

struct FileConfig {
  ModelParams model;
  std::string endpoint = "https://api.openai.com";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string passphrase_env = "SQLAUDIT_PASSPHRASE";
  std::string wordlist = "data/wordlist.txt";
  int tsa_instances = 1000;
};

FileConfig load_config(const std::string& path) {
  FileConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json doc = json::parse(in);
  cfg.model.model = doc.value("model", cfg.model.model);
  cfg.model.temperature = doc.value("temperature", cfg.model.temperature);
  cfg.endpoint = doc.value("endpoint", cfg.endpoint);
  cfg.api_key_env = doc.value("api_key_env", cfg.api_key_env);
  cfg.passphrase_env = doc.value("passphrase_env", cfg.passphrase_env);
  cfg.wordlist = doc.value("wordlist", cfg.wordlist);
  cfg.tsa_instances = doc.value("tsa_instances", cfg.tsa_instances);
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<Transport> make_transport(const GlobalOptions& g,
                                          const FileConfig& cfg) {
  if (!g.replay_path.empty()) {
    auto store = std::make_shared<TranscriptStore>(
        TranscriptStore::load(g.replay_path));
    return std::make_unique<ReplayTransport>(std::move(store));
  }
  if (!g.record_path.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (!key)
      throw std::runtime_error("record mode needs API key in $" +
                               cfg.api_key_env);
    HttpTransportConfig http;
    http.endpoint = cfg.endpoint;
    http.api_key = key;
    auto store = std::make_shared<TranscriptStore>();
    if (std::ifstream(g.record_path).good())
      *store = TranscriptStore::load(g.record_path);
    store->open_for_append(g.record_path);
    return std::make_unique<RecordTransport>(make_http_transport(http),
                                             std::move(store));
  }
  throw std::runtime_error("this command needs --replay or --record");
}

std::string passphrase_from_env(const FileConfig& cfg) {
  if (const char* p = std::getenv(cfg.passphrase_env.c_str())) return p;
  std::cerr << "passphrase (also settable via $" << cfg.passphrase_env
            << "): ";
  std::string pass;
  if (!std::getline(std::cin, pass) || pass.empty())
    throw std::runtime_error("no passphrase provided");
  return pass;
}

// predictions JSONL shared by `translate` (writer) and `evaluate` (reader)
void write_predictions(std::ostream& out, const std::vector<Prediction>& ps) {
  for (const auto& [rec, predicted] : ps) {
    json j = {{"database", rec.database_name},
              {"question", rec.nl_question},
              {"gold", rec.gold_sql},
              {"predicted", predicted}};
    out << j.dump() << "\n";
  }
}

std::vector<Prediction> read_predictions(const std::string& path,
                                         const LoadedDataset& dataset) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions: " + path);
  std::vector<Prediction> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line);
    QueryRecord rec;
    rec.database_name = j.at("database").get<std::string>();
    rec.nl_question = j.value("question", "");
    rec.gold_sql = j.at("gold").get<std::string>();
    const Database* db = nullptr;
    for (const auto& d : dataset.databases)
      if (iequal(d.name, rec.database_name)) db = &d;
    if (!db)
      throw std::runtime_error("predictions line " + std::to_string(lineno) +
                               ": unknown database " + rec.database_name);
    rec.hardness = classify_query(rec.gold_sql, db);
    out.emplace_back(std::move(rec), j.at("predicted").get<std::string>());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-SQL benchmark auditing toolkit"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--seed", g.seed, "base RNG seed");
  auto* replay_opt =
      app.add_option("--replay", g.replay_path, "replay transcript (JSONL)");
  app.add_option("--record", g.record_path, "record transcript (JSONL)")
      ->excludes(replay_opt);

  // ---- subcommand argument storage
  std::string manifest_path, dump_path, out_path, predictions_path;
  std::string wordlist_override, sql_text, in_path;
  double mask_ratio = 0.25;
  bool show_truth = false;
  int instances = 0, mcq_items = 10;
  std::string mcq_test_path, annotations_path;

  auto* cmd_stats = app.add_subcommand("stats", "dataset fact sheet");
  cmd_stats->add_option("--manifest", manifest_path)->required();
  cmd_stats->add_option("--wordlist", wordlist_override);

  auto* cmd_hardness =
      app.add_subcommand("hardness", "classify query hardness");
  cmd_hardness->add_option("--manifest", manifest_path);
  cmd_hardness->add_option("--sql", sql_text, "classify a single query");

  auto* cmd_mask = app.add_subcommand("mask", "mask column names in a dump");
  cmd_mask->add_option("--dump", dump_path)->required();
  cmd_mask->add_option("--ratio", mask_ratio);
  cmd_mask->add_flag("--show-truth", show_truth,
                     "print the ground-truth JSON instead of the dump");

  auto* cmd_dc = app.add_subcommand(
      "probe-dc", "masked column reconstruction probe per database");
  cmd_dc->add_option("--manifest", manifest_path)->required();

  auto* cmd_atd =
      app.add_subcommand("atd", "strip FKs and rows from a dump");
  cmd_atd->add_option("--dump", dump_path)->required();

  auto* cmd_translate =
      app.add_subcommand("translate", "NL-to-SQL translation round trips");
  cmd_translate->add_option("--manifest", manifest_path)->required();
  cmd_translate->add_option("--out", out_path, "predictions JSONL (default stdout)");
  bool translate_atd = false;
  cmd_translate->add_flag("--atd", translate_atd,
                          "send disconnected dumps instead of originals");

  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "score predictions by execution equivalence");
  cmd_evaluate->add_option("--manifest", manifest_path)->required();
  cmd_evaluate->add_option("--predictions", predictions_path)->required();
  cmd_evaluate->add_option("--instances", instances);

  auto* cmd_mcq = app.add_subcommand("mcq", "human hardness test");
  auto* mcq_build = cmd_mcq->add_subcommand("build", "generate test items");
  mcq_build->add_option("--manifest", manifest_path)->required();
  mcq_build->add_option("--items", mcq_items);
  mcq_build->add_option("--out", mcq_test_path)->required();
  auto* mcq_score = cmd_mcq->add_subcommand("score", "score annotations");
  mcq_score->add_option("--test", mcq_test_path)->required();
  mcq_score->add_option("--annotations", annotations_path)->required();
  cmd_mcq->require_subcommand(1);

  auto* cmd_pack = app.add_subcommand("pack", "encrypt a dataset directory");
  cmd_pack->add_option("--in", in_path)->required();
  cmd_pack->add_option("--out", out_path)->required();

  auto* cmd_unpack = app.add_subcommand("unpack", "decrypt a bundle");
  cmd_unpack->add_option("--in", in_path)->required();
  cmd_unpack->add_option("--out", out_path)->required();

  auto* cmd_audit =
      app.add_subcommand("audit", "full audit with report emission");
  cmd_audit->add_option("--manifest", manifest_path)->required();
  cmd_audit->add_option("--out-dir", out_path)->required();
  cmd_audit->add_option("--instances", instances);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitClean : kExitConfig;
  }

  try {
    FileConfig cfg = load_config(g.config_path);
    if (!wordlist_override.empty()) cfg.wordlist = wordlist_override;
    if (instances > 0) cfg.tsa_instances = instances;

    AuditConfig audit_cfg;
    audit_cfg.manifest_path = manifest_path;
    audit_cfg.wordlist_path = cfg.wordlist;
    audit_cfg.model = cfg.model;
    audit_cfg.seed = g.seed;
    audit_cfg.tsa_instances = cfg.tsa_instances;
    audit_cfg.replay = !g.replay_path.empty();
    audit_cfg.transcript_path =
        audit_cfg.replay ? g.replay_path : g.record_path;
    const std::string stamp = "sqlaudit " + std::string(kToolVersion) +
                              " config=" + config_hash(audit_cfg) +
                              " seed=" + std::to_string(g.seed);

    if (*cmd_stats) {
      LoadedDataset ds = load_dataset(manifest_path);
      for (const auto& w : ds.warnings) std::cerr << "warning: " << w << "\n";
      Wordlist wl = Wordlist::load(cfg.wordlist);
      FactSheet sheet = compute_fact_sheet(ds.databases, ds.queries, wl);
      std::cout << render_fact_sheet_md(sheet, ds.name, stamp);
      return kExitClean;
    }

    if (*cmd_hardness) {
      if (!sql_text.empty()) {
        std::cout << hardness_name(classify_query(sql_text)) << "\n";
        return kExitClean;
      }
      if (manifest_path.empty())
        throw std::runtime_error("hardness needs --manifest or --sql");
      LoadedDataset ds = load_dataset(manifest_path);
      HardnessHistogram h = hardness_histogram(ds.queries);
      std::cout << "database,easy,medium,hard,extra_hard\n";
      for (const auto& [db, counts] : h.per_database)
        std::cout << db << "," << counts[0] << "," << counts[1] << ","
                  << counts[2] << "," << counts[3] << "\n";
      std::cout << "TOTAL," << h.totals[0] << "," << h.totals[1] << ","
                << h.totals[2] << "," << h.totals[3] << "\n";
      return kExitClean;
    }

    if (*cmd_mask) {
      Database db = parse_dump(read_file(dump_path));
      MaskOptions opts;
      opts.ratio = mask_ratio;
      MaskedDump md = mask_columns(db, opts, g.seed);
      if (show_truth) {
        json truth = json::array();
        for (const auto& p : md.ground_truth)
          truth.push_back({{"table", p.table},
                           {"position", p.position},
                           {"name", p.true_name}});
        std::cout << json{{"seed", md.seed}, {"masks", truth}}.dump(2) << "\n";
      } else {
        std::cout << render_dump(md.database);
      }
      return kExitClean;
    }

    if (*cmd_dc) {
      LoadedDataset ds = load_dataset(manifest_path);
      auto transport = make_transport(g, cfg);
      DCReport r = run_dc_audit(ds.databases, *transport, cfg.model, {},
                                g.seed);
      std::cout << render_dc_md(r, stamp);
      return r.undecided.empty() ? kExitClean : kExitPartial;
    }

    if (*cmd_atd) {
      Database db = parse_dump(read_file(dump_path));
      std::cout << render_dump(apply_atd(db));
      return kExitClean;
    }

    if (*cmd_translate) {
      LoadedDataset ds = load_dataset(manifest_path);
      auto transport = make_transport(g, cfg);
      InterpretationCache cache;
      std::vector<Prediction> predictions;
      int failures = 0;
      std::vector<Database> dumps = ds.databases;
      if (translate_atd)
        for (auto& db : dumps) db = apply_atd(db);
      std::map<std::string, std::string> rendered;
      for (const auto& db : dumps) rendered[to_lower(db.name)] = render_dump(db);
      for (const auto& q : ds.queries) {
        try {
          const std::string key = to_lower(q.database_name);
          const std::string& interp =
              cache.acquire(key + (translate_atd ? "#atd" : ""),
                            rendered.at(key), *transport, cfg.model);
          ConversationScript conv = build_translation_conversation(
              rendered.at(key), interp, q.nl_question);
          std::string response = transport->send(conv.messages, cfg.model);
          predictions.emplace_back(q, extract_sql(response));
        } catch (const TransportError& e) {
          ++failures;
          std::cerr << "transport failure for question '" << q.nl_question
                    << "': " << e.what() << "\n";
        }
      }
      if (out_path.empty()) {
        write_predictions(std::cout, predictions);
      } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_predictions(out, predictions);
      }
      return failures == 0 ? kExitClean : kExitPartial;
    }

    if (*cmd_evaluate) {
      LoadedDataset ds = load_dataset(manifest_path);
      auto predictions = read_predictions(predictions_path, ds);
      TsaOptions tsa;
      tsa.max_instances = cfg.tsa_instances;
      tsa.base_seed = g.seed;
      EvalReport r = evaluate_suite(predictions, ds.databases, tsa);
      std::cout << render_eval_md(&r, nullptr, stamp);
      return kExitClean;
    }

    if (*mcq_build) {
      LoadedDataset ds = load_dataset(manifest_path);
      auto items = build_test(ds.queries, ds.databases,
                              static_cast<size_t>(mcq_items), g.seed);
      json out = json::array();
      for (const auto& item : items)
        out.push_back({{"question", item.nl_question},
                       {"database", item.schema_ref},
                       {"options", item.options},
                       {"answer", item.answer_index}});
      std::ofstream f(mcq_test_path, std::ios::trunc);
      if (!f) throw std::runtime_error("cannot write " + mcq_test_path);
      f << json{{"items", out}}.dump(2) << "\n";
      std::cout << "wrote " << items.size() << " items to " << mcq_test_path
                << "\n";
      return kExitClean;
    }

    if (*mcq_score) {
      json doc = json::parse(read_file(mcq_test_path));
      std::vector<int> key;
      for (const auto& item : doc.at("items"))
        key.push_back(item.at("answer").get<int>());
      AnnotationMatrix m;
      std::ifstream in(annotations_path);
      if (!in)
        throw std::runtime_error("cannot open " + annotations_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<int> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stoi(cell));
        m.choices.push_back(std::move(row));
      }
      AnnotationScores s = score_annotations(m, key);
      std::cout << "majority_accuracy " << s.majority_accuracy << "\n";
      std::cout << "fleiss_kappa " << s.fleiss_kappa << "\n";
      for (size_t i = 0; i < s.per_annotator_accuracy.size(); ++i)
        std::cout << "annotator_" << i << " "
                  << s.per_annotator_accuracy[i] << "\n";
      if (s.note) std::cout << "note " << *s.note << "\n";
      return kExitClean;
    }

    if (*cmd_pack) {
      // refuse to pack a directory that is not a loadable dataset
      load_dataset((std::filesystem::path(in_path) / "manifest.json").string());
      pack(in_path, passphrase_from_env(cfg), out_path);
      std::cout << "packed " << in_path << " -> " << out_path << "\n";
      return kExitClean;
    }

    if (*cmd_unpack) {
      unpack(in_path, passphrase_from_env(cfg), out_path);
      std::cout << "unpacked " << in_path << " -> " << out_path << "\n";
      return kExitClean;
    }

    if (*cmd_audit) {
      if (audit_cfg.transcript_path.empty())
        throw std::runtime_error("audit needs --replay or --record");
      if (!audit_cfg.replay) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (!key)
          throw std::runtime_error("record mode needs API key in $" +
                                   cfg.api_key_env);
        audit_cfg.http.endpoint = cfg.endpoint;
        audit_cfg.http.api_key = key;
      }
      audit_cfg.out_dir = out_path;
      AuditResult r = run_full_audit(audit_cfg);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& s : r.stages)
        std::cout << s.name << ": " << (s.ok ? "ok" : "FAILED " + s.error)
                  << "\n";
      return r.clean() ? kExitClean : kExitPartial;
    }

    throw std::runtime_error("no subcommand handled");
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
}
