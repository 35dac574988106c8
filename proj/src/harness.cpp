#include "pluri/harness.hpp"

#include <algorithm>
#include <map>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pluri {

namespace fs = std::filesystem;

namespace {

Json ledger_json(const std::vector<LedgerEntry>& entries) {
  Json j = Json::array();
  for (const auto& e : entries) {
    Json je;
    je["id"] = e.id;
    je["passed"] = e.passed;
    je["value"] = e.value;
    je["threshold"] = e.threshold;
    je["detail"] = e.detail;
    j.push_back(je);
  }
  return j;
}

bool ledger_ok(const std::vector<LedgerEntry>& entries) {
  return std::all_of(entries.begin(), entries.end(),
                     [](const LedgerEntry& e) { return e.passed; });
}

std::string now_iso() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%FT%TZ");
  return os.str();
}

Json default_probe_list() {
  // Ten probe points spread over radii and angles of the unit disc.
  return Json::array({
      Json::array({Json::array({0.6, 0.0})}),
      Json::array({Json::array({0.65, 0.0})}),
      Json::array({Json::array({0.7, 0.0})}),
      Json::array({Json::array({0.5303300858899107, 0.5303300858899107})}),
      Json::array({Json::array({0.0, 0.8})}),
      Json::array({Json::array({-0.85, 0.0})}),
      Json::array({Json::array({0.9, 0.0})}),
      Json::array({Json::array({-0.35, 0.6062177826491071})}),
      Json::array({Json::array({0.0, -0.65})}),
      Json::array({Json::array({0.95, 0.0})}),
  });
}

std::vector<ComplexPoint> probes_from(const Json& j, const std::string& path) {
  std::vector<ComplexPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(point_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// ---------------------------------------------------------------------------
// Individual experiment runners. Each returns the deterministic payload.

Json run_envelope(const Json& cfg, const fs::path& dir, std::vector<LedgerEntry>& ledger) {
  DomainSpec domain = domain_from_json(cfg.at("domain"));
  SetPtr A = set_from_json(cfg.at("set"));
  SolverParams solver = cfg.contains("solver") ? solver_from_json(cfg["solver"]) : SolverParams{};
  GridPtr grid = make_grid(domain, solver);

  Json key_cfg;
  key_cfg["domain"] = cfg.at("domain");
  key_cfg["set"] = cfg.at("set");
  key_cfg["solver"] = to_json(solver);
  std::string key = config_hash(key_cfg);

  GridField field;
  bool from_cache = false;
  fs::path cache_path = dir / "fields" / ("cache_" + key + ".plf");
  EnvelopeResult env;
  if (read_field_cache(cache_path, grid, key, field)) {
    from_cache = true;
    env.field = field;
    env.converged = true;
    env.method = "cache";
  } else {
    GridField obstacle = build_obstacle(domain, *A, grid);
    env = psh_envelope(obstacle, grid->directions(), solver.tol, solver.max_iter, solver.mode);
    write_field_cache(cache_path, env.field, key);
  }
  write_field_csv(dir / "fields" / "envelope.csv", env.field);

  Json out;
  out["experiment"] = "envelope";
  out["converged"] = env.converged;
  out["iterations"] = env.iterations;
  out["final_change"] = env.final_change;
  out["method"] = env.method;
  out["from_cache"] = from_cache;
  out["nodes"] = grid->count();
  out["directions"] = to_json(solver)["directions"];
  if (!env.converged)
    ledger.push_back({"envelope-converged", false, static_cast<double>(env.iterations),
                      static_cast<double>(solver.max_iter), "iteration budget exhausted"});
  if (cfg.contains("probes")) {
    Json vals = Json::array();
    for (const auto& p : probes_from(cfg["probes"], "probes"))
      vals.push_back(interpolate(env.field, p));
    out["probe_values"] = vals;
  }
  return out;
}

Json run_disc_opt(const Json& cfg, const fs::path& dir, std::vector<LedgerEntry>& ledger) {
  DomainSpec domain = domain_from_json(cfg.at("domain"));
  SetPtr A = set_from_json(cfg.at("set"));
  if (!cfg.contains("probe")) throw ConfigError("probe", "disc-opt requires a probe point");
  ComplexPoint x = point_from_json(cfg["probe"], "probe");
  DiscOptParams opt =
      cfg.contains("optimizer") ? optimizer_from_json(cfg["optimizer"]) : DiscOptParams{};
  DiscOptResult res = optimize_discs(domain, *A, x, opt);
  write_json(dir / "discs" / "best.json", to_json(res.best));
  Json out = to_json(res);
  out["experiment"] = "disc-opt";
  ledger.push_back({"feasible", res.margin >= 0.0, res.margin, 0.0, "boundary gauge margin"});
  return out;
}

Json run_capacity(const Json& cfg, const fs::path& dir, std::vector<LedgerEntry>& ledger) {
  DomainSpec domain = domain_from_json(cfg.at("domain"));
  SetPtr A = set_from_json(cfg.at("set"));
  SolverParams solver = cfg.contains("solver") ? solver_from_json(cfg["solver"]) : SolverParams{};
  CapacityReport rep = capacity(domain, *A, solver);
  Json out = to_json(rep);
  out["experiment"] = "capacity";
  if (!rep.envelope_converged)
    ledger.push_back({"envelope-converged", false, static_cast<double>(rep.iterations), 0.0,
                      "iteration budget exhausted"});
  (void)dir;
  return out;
}

Json run_boundary(const Json& cfg, const fs::path& dir, std::vector<LedgerEntry>& ledger) {
  std::string check = cfg.value("check", "poisson");
  Json out;
  out["experiment"] = "boundary";
  out["check"] = check;
  if (check == "poisson" || check == "omega-boundary") {
    SetPtr U = set_from_json(cfg.at("set"));
    auto probes = probes_from(cfg.at("probes"), "probes");
    Json vals = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "re,im,value\n";
    for (const auto& p : probes) {
      double v = check == "poisson" ? poisson(p.z1(), *U) : omega_boundary(*U, p.z1()).value;
      vals.push_back(v);
      csv << p.z1().real() << "," << p.z1().imag() << "," << v << "\n";
    }
    out["values"] = vals;
    write_text(dir / "probes.csv", csv.str());
  } else if (check == "equality") {
    SetPtr U = set_from_json(cfg.at("set"));
    auto probes = probes_from(cfg.at("probes"), "probes");
    int cap = cfg.value("degree_cap", 4);
    std::uint64_t seed = cfg.value("seed", 1ull);
    Json reports = Json::array();
    for (const auto& p : probes) {
      BoundaryEqualityReport rep = verify_boundary_equality(p.z1(), *U, cap, seed);
      reports.push_back(to_json(rep));
      ledger.push_back({"equality", rep.pass, rep.equality_gap, 1e-9, "gap at probe"});
    }
    out["reports"] = reports;
  } else if (check == "weak-regularity") {
    SetPtr U = set_from_json(cfg.at("set"));
    WeakRegularityReport rep = weak_regularity_probe(*U, cfg.value("interior_rays", 3));
    out["report"] = to_json(rep);
    std::ostringstream csv;
    csv.precision(17);
    csv << "angle,radius,value\n";
    for (const auto& ray : rep.rays)
      for (const auto& [r, v] : ray.trace) csv << ray.angle << "," << r << "," << v << "\n";
    write_text(dir / "probes.csv", csv.str());
    ledger.push_back({"weak-regularity", rep.pass, rep.worst_inside_gap, 1e-3, "worst ray gap"});
  } else if (check == "monotone-union") {
    if (!cfg.contains("sets")) throw ConfigError("sets", "monotone-union requires a set list");
    std::vector<TorusArcs> nested;
    TorusArcs acc;
    for (std::size_t i = 0; i < cfg["sets"].size(); ++i) {
      acc = acc.unite(to_torus_arcs(*set_from_json(cfg["sets"][i],
                                                   "sets[" + std::to_string(i) + "]")));
      nested.push_back(acc);
    }
    ComplexPoint x = point_from_json(cfg.at("probe"), "probe");
    MonotoneUnionReport rep = verify_monotone_union(x.z1(), nested);
    out["report"] = to_json(rep);
    ledger.push_back({"monotone-union", rep.pass, rep.final_gap, rep.tol, "limit gap"});
  } else {
    throw ConfigError("check", "unknown boundary check '" + check + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification suite

struct VerifyParams {
  std::uint64_t seed;
  SolverParams solver;   // envelope runs
  DiscOptParams opt;     // probe optimizations
};

Json verify_open_equality(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};
  SetPtr A = sets::open_disc({0, 0}, 0.5);
  GridPtr grid = make_grid(disc, vp.solver);
  GridField obstacle = build_obstacle(disc, *A, grid);
  EnvelopeResult env =
      psh_envelope(obstacle, grid->directions(), vp.solver.tol, vp.solver.max_iter,
                   vp.solver.mode);
  Json probes_out = Json::array();
  auto probes = probes_from(default_probe_list(), "probes");
  // Main probe first: sigma floor and two-sided gap at x = 0.7.
  DiscOptParams main_opt = vp.opt;
  main_opt.seed = vp.seed;
  DiscBoundReport main =
      verify_disc_bound_with_field(env.field, disc, *A, ComplexPoint(Complex(0.7, 0.0)), 0.06,
                                   main_opt, true);
  ledger.push_back({"sigma-floor", main.sigma_best >= 0.46, main.sigma_best, 0.46,
                    "best sigma at x=0.7"});
  ledger.push_back({"equality-gap", main.pass_equality.value_or(false),
                    std::abs(main.omega_upper - main.omega_est), 0.06, "x=0.7"});
  Json jm = to_json(main);
  jm["probe"] = Json::array({Json::array({0.7, 0.0})});
  probes_out.push_back(jm);
  // Inequality side at every probe point.
  for (std::size_t i = 0; i < probes.size(); ++i) {
    DiscOptParams opt = vp.opt;
    opt.seed = vp.seed + 1000 + i;
    opt.restarts = std::max(6, vp.opt.restarts / 2);
    DiscBoundReport rep =
        verify_disc_bound_with_field(env.field, disc, *A, probes[i], 0.06, opt, false);
    ledger.push_back({"lower-bound-" + std::to_string(i), rep.pass_lower,
                      rep.omega_upper - rep.omega_est, -0.03, "omega_upper - omega_est"});
    Json jr = to_json(rep);
    jr["probe"] = to_json(probes[i]);
    probes_out.push_back(jr);
  }
  Json out;
  out["experiment"] = "open-equality";
  out["reports"] = probes_out;
  return out;
}

Json verify_closed_bound(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};
  SetPtr A = sets::closed_disc({0, 0}, 0.5);
  GridPtr grid = make_grid(disc, vp.solver);
  GridField obstacle = build_obstacle(disc, *A, grid);
  EnvelopeResult env = psh_envelope(obstacle, grid->directions(), vp.solver.tol,
                                    vp.solver.max_iter, vp.solver.mode);
  auto probes = probes_from(default_probe_list(), "probes");
  Json reports = Json::array();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    DiscOptParams opt = vp.opt;
    opt.seed = vp.seed + 2000 + i;
    DiscBoundReport rep =
        verify_disc_bound_with_field(env.field, disc, *A, probes[i], 0.08, opt, false);
    ledger.push_back({"upper-bound-" + std::to_string(i), rep.pass_upper,
                      rep.omega_upper - rep.omega_est, 0.08, "omega_upper - omega_est"});
    Json jr = to_json(rep);
    jr["probe"] = to_json(probes[i]);
    reports.push_back(jr);
  }
  Json out;
  out["experiment"] = "closed-bound";
  out["reports"] = reports;
  return out;
}

Json verify_borel_bound(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};
  // Borel set: a closed disc plus a polar (finite) part.
  SetPtr A = sets::set_union(
      sets::closed_disc({0.3, 0.0}, 0.15),
      sets::points({ComplexPoint(Complex(-0.5, 0.5)), ComplexPoint(Complex(-0.6, 0.0))}));
  GridPtr grid = make_grid(disc, vp.solver);
  GridField obstacle = build_obstacle(disc, *A, grid);
  EnvelopeResult env = psh_envelope(obstacle, grid->directions(), vp.solver.tol,
                                    vp.solver.max_iter, vp.solver.mode);
  GridField star = usc_regularize(env.field);
  std::vector<ComplexPoint> probes = {ComplexPoint(Complex(0.62, 0.0)),
                                      ComplexPoint(Complex(0.05, -0.45))};
  Json reports = Json::array();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    DiscOptParams opt = vp.opt;
    opt.seed = vp.seed + 3000 + i;
    DiscBoundReport rep = verify_disc_bound_with_field(star, disc, *A, probes[i], 0.08, opt,
                                                       false);
    ledger.push_back({"borel-upper-" + std::to_string(i), rep.pass_upper,
                      rep.omega_upper - rep.omega_est, 0.08, "omega_upper - omega_star"});
    Json jr = to_json(rep);
    jr["probe"] = to_json(probes[i]);
    reports.push_back(jr);
  }
  Json out;
  out["experiment"] = "borel-bound";
  out["reports"] = reports;
  return out;
}

Json verify_choquet(std::vector<LedgerEntry>& ledger) {
  AxiomLedger ax = axiom_suite();
  for (const auto& e : ax.entries)
    ledger.push_back({e.id, e.passed, e.value, e.reference, e.detail});
  Json out;
  out["experiment"] = "choquet-axioms";
  out["ledger"] = to_json(ax);
  return out;
}

Json verify_pluripolar(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  PolarTestParams pp;
  pp.seed = vp.seed;
  pp.exhaustion_opt = vp.opt;
  pp.exhaustion_opt.restarts = std::max(6, vp.opt.restarts / 2);
  pp.exhaustion_opt.budget = std::min<long>(vp.opt.budget, 1500);
  PolarReport rep = polar_disc_test(pp);
  ledger.push_back({"finite-sigma-zero", rep.finite_sigma_zero,
                    static_cast<double>(rep.discs_checked), 1.0, "exact sigma of finite sets"});
  double worst = 0.0;
  for (double e : rep.ratio_errors) worst = std::max(worst, e);
  ledger.push_back({"capacity-decay", rep.ratios_pass, worst, 0.10, "worst ratio error"});
  ledger.push_back({"exhaustion-monotone", rep.exhaustion_monotone,
                    rep.exhaustion_sigma.empty() ? 0.0 : rep.exhaustion_sigma.back(), 0.0,
                    "best sigma grows with the domain"});
  Json out;
  out["experiment"] = "pluripolar";
  out["report"] = to_json(rep);
  return out;
}

Json verify_boundary_eq(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  CounterRng rng(vp.seed, 0x43ull);
  Json reports = Json::array();
  double worst_gap = 0.0, worst_center = 0.0;
  for (int i = 0; i < 10; ++i) {
    CounterRng draw = rng.split(static_cast<std::uint64_t>(i));
    double r = 0.15 + 0.7 * draw.next_double();
    double ang = draw.uniform(0.0, kTwoPi);
    Complex x = r * Complex(std::cos(ang), std::sin(ang));
    int arcs_n = 1 + static_cast<int>(draw.next_u64() % 3);
    std::vector<TorusInterval> iv;
    double cursor = draw.next_double() * 0.1;
    for (int a = 0; a < arcs_n; ++a) {
      double len = 0.05 + 0.25 * draw.next_double() / arcs_n;
      iv.push_back({cursor, len});
      cursor += len + 0.05 + 0.2 * draw.next_double() / arcs_n;
    }
    TorusArcs U = TorusArcs::from_intervals(iv);
    double pv = poisson(x, U);
    BlaschkeDisc phi = mobius_through(x);
    double sb = blaschke_sigma(phi, U);
    double gap = std::abs(pv + sb);
    worst_gap = std::max(worst_gap, gap);
    double center_gap = std::abs(poisson(Complex(0, 0), U) + U.measure());
    worst_center = std::max(worst_center, center_gap);
    Json jr;
    jr["x"] = Json::array({x.real(), x.imag()});
    jr["poisson"] = pv;
    jr["mobius_sigma"] = sb;
    jr["gap"] = gap;
    reports.push_back(jr);
  }
  ledger.push_back({"automorphism-equality", worst_gap <= 1e-9, worst_gap, 1e-9,
                    "worst |poisson + sigma| over 10 pairs"});
  ledger.push_back({"center-identity", worst_center <= 1e-12, worst_center, 1e-12,
                    "worst |poisson(0,U) + sigma(U)|"});
  // Decay of the middle-thirds trace at the center.
  double worst_cantor = 0.0;
  for (int m = 1; m <= 12; ++m) {
    double v = poisson(Complex(0, 0), *sets::cantor(m, 1.0 / 3.0));
    double expect = std::pow(2.0 / 3.0, m);
    worst_cantor = std::max(worst_cantor, std::abs(std::abs(v) - expect));
  }
  ledger.push_back({"cantor-decay", worst_cantor <= 1e-9, worst_cantor, 1e-9,
                    "center value vs (2/3)^m, m=1..12"});
  Json out;
  out["experiment"] = "boundary-equality";
  out["reports"] = reports;
  return out;
}

Json verify_boundary_cl(const VerifyParams& vp, std::vector<LedgerEntry>& ledger) {
  SetPtr A1 = sets::set_union(sets::arc(0.3, 1.1), sets::arc(2.5, 3.3));
  SetPtr E = sets::points({ComplexPoint(Complex(std::cos(4.0), std::sin(4.0))),
                           ComplexPoint(Complex(std::cos(5.2), std::sin(5.2)))});
  SetPtr A = sets::set_union(A1, E);
  CounterRng rng(vp.seed, 0x410ull);
  Json reports = Json::array();
  bool all = true;
  for (int i = 0; i < 3; ++i) {
    double r = 0.2 + 0.5 * rng.next_double();
    double ang = rng.uniform(0.0, kTwoPi);
    Complex x = r * Complex(std::cos(ang), std::sin(ang));
    BoundaryClosureReport rep = verify_boundary_closure(x, *A);
    all = all && rep.pass;
    reports.push_back(to_json(rep));
    ledger.push_back({"closure-chain-" + std::to_string(i), rep.pass,
                      rep.sigma_bound - rep.omega_star, rep.tol,
                      "omega(closure) <= -sigma <= omega*"});
  }
  Json out;
  out["experiment"] = "boundary-closure";
  out["reports"] = reports;
  return out;
}

Json run_verify(const Json& cfg, const fs::path& dir, std::vector<LedgerEntry>& ledger) {
  VerifyParams vp;
  vp.seed = cfg.value("seed", 20260811ull);
  vp.solver = cfg.contains("solver") ? solver_from_json(cfg["solver"]) : SolverParams{};
  if (!cfg.contains("solver")) {
    vp.solver.mode = SolverMode::Direct;  // same fixed point, fast enough to rerun
  }
  vp.opt = cfg.contains("optimizer") ? optimizer_from_json(cfg["optimizer"]) : DiscOptParams{};
  vp.opt.seed = vp.seed;
  if (!cfg.contains("optimizer")) {
    vp.opt.restarts = 12;
    vp.opt.budget = 1600;
  }
  std::vector<std::string> suite;
  if (cfg.contains("suite"))
    suite = cfg["suite"].get<std::vector<std::string>>();
  else
    suite = verify_experiment_names();

  Json out;
  out["experiment"] = "verify";
  Json subs = Json::object();
  for (const std::string& name : suite) {
    std::vector<LedgerEntry> sub_ledger;
    Json payload;
    if (name == "open-equality")
      payload = verify_open_equality(vp, sub_ledger);
    else if (name == "closed-bound")
      payload = verify_closed_bound(vp, sub_ledger);
    else if (name == "borel-bound")
      payload = verify_borel_bound(vp, sub_ledger);
    else if (name == "choquet-axioms")
      payload = verify_choquet(sub_ledger);
    else if (name == "pluripolar")
      payload = verify_pluripolar(vp, sub_ledger);
    else if (name == "boundary-equality")
      payload = verify_boundary_eq(vp, sub_ledger);
    else if (name == "boundary-closure")
      payload = verify_boundary_cl(vp, sub_ledger);
    else
      throw ConfigError("suite", "unknown experiment '" + name + "'");

    Json record;
    record["experiment"] = name;
    record["outputs"] = payload;
    record["ledger"] = ledger_json(sub_ledger);
    record["passed"] = ledger_ok(sub_ledger);
    record["version"] = kVersion;
    write_json(dir / name / "results.json", record);
    subs[name] = record["passed"];
    for (auto& e : sub_ledger) {
      e.id = name + "/" + e.id;
      ledger.push_back(e);
    }
  }
  out["experiments"] = subs;
  return out;
}

}  // namespace

const std::vector<std::string>& verify_experiment_names() {
  static const std::vector<std::string> names = {
      "open-equality",    "closed-bound",      "borel-bound",     "choquet-axioms",
      "pluripolar",       "boundary-equality", "boundary-closure"};
  return names;
}

ExperimentConfig parse_config(Json config, const Json& overrides) {
  if (!config.is_object()) throw ConfigError("", "config must be an object");
  // Flat CLI overrides map onto nested fields.
  if (overrides.contains("seed")) config["seed"] = overrides["seed"];
  if (overrides.contains("out")) config["out"] = overrides["out"];
  if (overrides.contains("grid_h")) config["solver"]["grid_h"] = overrides["grid_h"];
  if (overrides.contains("tol")) config["solver"]["tol"] = overrides["tol"];
  if (overrides.contains("degree")) config["optimizer"]["degree"] = overrides["degree"];
  if (overrides.contains("restarts")) config["optimizer"]["restarts"] = overrides["restarts"];
  if (overrides.contains("samples")) config["optimizer"]["samples"] = overrides["samples"];

  ExperimentConfig out;
  if (!config.contains("kind") || !config["kind"].is_string())
    throw ConfigError("kind", "expected one of envelope|disc-opt|boundary|capacity|verify");
  out.kind = config["kind"].get<std::string>();
  const std::vector<std::string> kinds = {"envelope", "disc-opt", "boundary", "capacity",
                                          "verify"};
  if (std::find(kinds.begin(), kinds.end(), out.kind) == kinds.end())
    throw ConfigError("kind", "unknown experiment kind '" + out.kind + "'");
  // Validate eagerly so config errors carry field paths.
  if (config.contains("solver")) solver_from_json(config["solver"]);
  if (config.contains("optimizer")) optimizer_from_json(config["optimizer"]);
  if (config.contains("domain")) domain_from_json(config["domain"]);
  if (config.contains("set")) set_from_json(config["set"]);
  bool stochastic = out.kind == "disc-opt" || out.kind == "verify";
  if (stochastic && !config.contains("seed") &&
      !(config.contains("optimizer") && config["optimizer"].contains("seed")))
    throw ConfigError("seed", "stochastic runs require a seed");
  out.out_dir = config.value("out", std::string("runs/") + out.kind);
  out.raw = std::move(config);
  return out;
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  result.dir = config.out_dir;
  fs::create_directories(config.out_dir);
  std::string started = now_iso();

  Json canonical = config.raw;
  write_json(config.out_dir / "config.json", canonical);
  std::vector<LedgerEntry> ledger;
  Json outputs;
  if (config.kind == "envelope")
    outputs = run_envelope(canonical, config.out_dir, ledger);
  else if (config.kind == "disc-opt")
    outputs = run_disc_opt(canonical, config.out_dir, ledger);
  else if (config.kind == "capacity")
    outputs = run_capacity(canonical, config.out_dir, ledger);
  else if (config.kind == "boundary")
    outputs = run_boundary(canonical, config.out_dir, ledger);
  else
    outputs = run_verify(canonical, config.out_dir, ledger);

  Json record;
  record["config_hash"] = config_hash(canonical);
  record["version"] = kVersion;
  record["outputs"] = outputs;
  record["ledger"] = ledger_json(ledger);
  record["passed"] = ledger_ok(ledger);
  // Timestamps live outside the deterministic payload.
  Json meta;
  meta["started_at"] = started;
  meta["finished_at"] = now_iso();
  write_json(config.out_dir / "run_meta.json", meta);
  write_json(config.out_dir / "results.json", record);
  result.record = record;
  result.ok = ledger_ok(ledger);
  return result;
}

ReportSummary report(const fs::path& dir) {
  ReportSummary summary;
  // Collect records by experiment name.
  std::map<std::string, Json> found;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.path().filename() != "results.json") continue;
      try {
        Json j = read_json(entry.path());
        std::string name = j.contains("experiment")
                               ? j["experiment"].get<std::string>()
                               : j["outputs"].value("experiment", std::string("unknown"));
        found[name] = j;
      } catch (...) {
        continue;
      }
    }
  }
  std::ostringstream text, csv;
  csv << "experiment,status,detail\n";
  text << std::left << std::setw(22) << "experiment" << std::setw(10) << "status"
       << "detail\n";
  for (const std::string& name : verify_experiment_names()) {
    ReportRow row;
    row.experiment = name;
    auto it = found.find(name);
    if (it == found.end()) {
      row.status = "missing";
      summary.complete = false;
      summary.all_passed = false;
    } else {
      bool ok = it->second.value("passed", false);
      row.status = ok ? "pass" : "fail";
      if (!ok) summary.all_passed = false;
      int n = it->second.contains("ledger") ? static_cast<int>(it->second["ledger"].size()) : 0;
      row.detail = std::to_string(n) + " checks";
    }
    csv << row.experiment << "," << row.status << "," << row.detail << "\n";
    text << std::left << std::setw(22) << row.experiment << std::setw(10) << row.status
         << row.detail << "\n";
    summary.rows.push_back(row);
  }
  summary.text = text.str();
  summary.csv = csv.str();
  return summary;
}

}  // namespace pluri
