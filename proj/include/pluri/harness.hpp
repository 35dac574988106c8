#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pluri/io.hpp"

namespace pluri {

// One pass/fail line of a run's ledger.
struct LedgerEntry {
  std::string id;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RunResult {
  Json record;  // deterministic payload written to results.json
  bool ok = true;
  std::filesystem::path dir;
};

// Validated experiment description. `raw` keeps the canonical config used for
// hashing and persistence.
struct ExperimentConfig {
  std::string kind;  // envelope | disc-opt | boundary | capacity | verify
  Json raw;
  std::filesystem::path out_dir;
};

// Parse + validate a config object; `overrides` (flat keys such as "seed",
// "grid_h", "degree", "restarts", "samples", "tol", "out") take precedence
// over file fields.
ExperimentConfig parse_config(Json config, const Json& overrides = Json::object());

// Execute the experiment, writing config.json, results.json, run_meta.json
// and per-kind artifacts (fields/*.csv, discs/*.json) under its directory.
// Identical config+seed produces a byte-identical results.json.
RunResult run(const ExperimentConfig& config);

struct ReportRow {
  std::string experiment;
  std::string status;  // "pass", "fail", "missing"
  std::string detail;
};

struct ReportSummary {
  std::vector<ReportRow> rows;
  bool complete = true;
  bool all_passed = true;
  std::string text;  // human-readable table
  std::string csv;
};

// Aggregate results.json records under a directory into the standard
// verification table (one row per suite experiment).
ReportSummary report(const std::filesystem::path& dir);

// Names of the verification-suite experiments, in report order.
const std::vector<std::string>& verify_experiment_names();

}  // namespace pluri
