#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqlaudit/contamination.hpp"
#include "sqlaudit/llm.hpp"
#include "sqlaudit/manifest.hpp"
#include "sqlaudit/stats.hpp"
#include "sqlaudit/tsa.hpp"

namespace sqlaudit {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct AuditConfig {
  std::string manifest_path;
  std::string wordlist_path;
  std::string transcript_path;  // replay source or record target
  bool replay = true;           // false: record through HTTP
  HttpTransportConfig http;     // only used when recording
  ModelParams model;
  uint64_t seed = 42;
  int tsa_instances = 1000;
  std::string out_dir;
};

// BLAKE2b hex digest over the output-relevant configuration fields; stamped
// into every report so runs are attributable.
std::string config_hash(const AuditConfig& cfg);

struct StageStatus {
  std::string name;
  bool ok = true;
  std::string error;
};

struct AuditResult {
  std::vector<StageStatus> stages;
  std::vector<std::string> warnings;
  bool clean() const {
    for (const auto& s : stages)
      if (!s.ok) return false;
    return true;
  }
};

// Runs fact-sheet, DC-probe, translation (original and disconnected) and
// execution-equivalence scoring in sequence; a failing stage is recorded and
// later stages still run. Writes fact_sheet.md, dc_report.md,
// dc_per_database.csv, eval_report.md, eval_per_database.csv,
// atd_prompts.jsonl and manual_review.jsonl under cfg.out_dir. Output bytes
// depend only on inputs, seed and configuration.
AuditResult run_full_audit(const AuditConfig& cfg);

// ---- report emitters (also used by individual subcommands) ----------------

std::string render_fact_sheet_md(const FactSheet& fs, const std::string& name,
                                 const std::string& stamp);
std::string render_dc_md(const DCReport& r, const std::string& stamp);
std::string render_dc_csv(const DCReport& r, const std::string& stamp);
// Side-by-side per-hardness accuracy table; either report may be null.
std::string render_eval_md(const EvalReport* original, const EvalReport* atd,
                           const std::string& stamp);
std::string render_eval_csv(const EvalReport* original, const EvalReport* atd,
                            const std::string& stamp);

}  // namespace sqlaudit
