#include <CLI11.hpp>
#include <iostream>

#include "pluri/harness.hpp"

namespace {

// Shared flags; only flags the user passed override config fields.
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  double grid_h = 0.0;
  double tol = 0.0;
  int degree = 0;
  int restarts = 0;
  int samples = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file (JSON)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "root seed for stochastic runs");
    cmd->add_option("--grid-h", grid_h, "grid resolution");
    cmd->add_option("--tol", tol, "solver sup-change tolerance");
    cmd->add_option("--degree", degree, "disc polynomial degree");
    cmd->add_option("--restarts", restarts, "optimizer restarts");
    cmd->add_option("--samples", samples, "boundary samples for sigma");
  }

  pluri::Json overrides(const CLI::App* cmd) const {
    pluri::Json o = pluri::Json::object();
    if (cmd->count("--out")) o["out"] = out_dir;
    if (cmd->count("--seed")) o["seed"] = seed;
    if (cmd->count("--grid-h")) o["grid_h"] = grid_h;
    if (cmd->count("--tol")) o["tol"] = tol;
    if (cmd->count("--degree")) o["degree"] = degree;
    if (cmd->count("--restarts")) o["restarts"] = restarts;
    if (cmd->count("--samples")) o["samples"] = samples;
    return o;
  }
};

int run_kind(const std::string& kind, const CommonFlags& flags, const CLI::App* cmd) {
  pluri::Json cfg;
  if (!flags.config_path.empty()) {
    cfg = pluri::read_json(flags.config_path);
  } else if (kind == "verify") {
    cfg = pluri::Json::object();
    cfg["seed"] = 20260811;
  } else {
    std::cerr << "error: " << kind << " requires --config\n";
    return 2;
  }
  cfg["kind"] = kind;
  pluri::ExperimentConfig config = pluri::parse_config(cfg, flags.overrides(cmd));
  pluri::RunResult result = pluri::run(config);
  std::cout << (result.ok ? "ok" : "FAILED") << "  " << result.dir.string() << "\n";
  for (const auto& entry : result.record["ledger"]) {
    std::cout << (entry["passed"].get<bool>() ? "  [pass] " : "  [FAIL] ")
              << entry["id"].get<std::string>() << "  value=" << entry["value"].dump()
              << " threshold=" << entry["threshold"].dump() << "\n";
  }
  return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for relative extremal functions and analytic discs"};
  app.require_subcommand(1);

  std::map<std::string, CommonFlags> flags;
  std::map<std::string, CLI::App*> cmds;
  for (const char* kind : {"envelope", "disc-opt", "boundary", "capacity", "verify"}) {
    CLI::App* cmd = app.add_subcommand(kind, std::string("run a ") + kind + " experiment");
    flags[kind].attach(cmd);
    cmds[kind] = cmd;
  }
  CLI::App* rep = app.add_subcommand("report", "summarize results under a directory");
  std::string report_dir = "runs";
  rep->add_option("--out", report_dir, "directory holding run results");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [kind, cmd] : cmds)
      if (cmd->parsed()) return run_kind(kind, flags[kind], cmd);
    if (rep->parsed()) {
      pluri::ReportSummary summary = pluri::report(report_dir);
      std::cout << summary.text;
      pluri::write_text(std::filesystem::path(report_dir) / "summary.csv", summary.csv);
      if (!summary.complete) std::cout << "(partial: some experiments missing)\n";
      return summary.all_passed ? 0 : 1;
    }
  } catch (const pluri::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
