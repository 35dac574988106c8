#include "pluri/capacity.hpp"

#include <cmath>
#include <sstream>

namespace pluri {

ChartMeasure ChartMeasure::over(const GridPtr& grid) {
  ChartMeasure m;
  m.grid = grid;
  m.interior_count = grid->interior_count();
  if (m.interior_count == 0) throw ValidationError("domain grid has no interior nodes");
  m.node_weight = 1.0 / static_cast<double>(m.interior_count);
  return m;
}

double ChartMeasure::total() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < interior_count; ++i) s.add(node_weight);
  return s.value();
}

CapacityReport capacity(const DomainSpec& domain, const SetExpr& A, const SolverParams& params) {
  GridPtr grid = make_grid(domain, params);
  ChartMeasure mu = ChartMeasure::over(grid);
  GridField obstacle = build_obstacle(domain, A, grid);
  EnvelopeResult env =
      psh_envelope(obstacle, grid->directions(), params.tol, params.max_iter, params.mode);
  GridField star = usc_regularize(env.field);
  CompensatedSum s;
  for (std::size_t i = 0; i < grid->count(); ++i)
    if (grid->cls(i) == NodeClass::Interior) s.add(star.v[i]);
  CapacityReport rep;
  rep.value = std::min(1.0, std::max(0.0, -s.value() * mu.node_weight));
  rep.grid_h = params.h;
  rep.nodes = grid->count();
  rep.envelope_converged = env.converged;
  rep.iterations = env.iterations;
  rep.method = env.method;
  return rep;
}

bool AxiomLedger::all_passed() const {
  for (const auto& e : entries)
    if (!e.passed) return false;
  return true;
}

namespace {

// Capacity from a fixed-budget monotone run; identical budgets keep the
// envelope iterates ordered, so c inherits exact monotonicity.
double capacity_fixed_budget(const DomainSpec& domain, const SetExpr& A, double h, long budget,
                             std::size_t cap) {
  SolverParams p;
  p.h = h;
  p.tol = 0.0;
  p.max_iter = budget;
  p.mode = SolverMode::Relax;
  p.node_cap = cap;
  GridPtr grid = make_grid(domain, p);
  ChartMeasure mu = ChartMeasure::over(grid);
  GridField obstacle = build_obstacle(domain, A, grid);
  EnvelopeResult env = psh_envelope(obstacle, grid->directions(), 0.0, budget);
  GridField star = usc_regularize(env.field);
  CompensatedSum s;
  for (std::size_t i = 0; i < grid->count(); ++i)
    if (grid->cls(i) == NodeClass::Interior) s.add(star.v[i]);
  return -s.value() * mu.node_weight;
}

double capacity_direct(const DomainSpec& domain, const SetExpr& A, double h, std::size_t cap) {
  SolverParams p;
  p.h = h;
  p.mode = SolverMode::Direct;
  p.node_cap = cap;
  return capacity(domain, A, p).value;
}

}  // namespace

AxiomLedger axiom_suite(const AxiomSuiteParams& params) {
  AxiomLedger ledger;
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};

  // (1) exact monotonicity over five nested families, shared grid and budget.
  struct Family {
    std::string name;
    std::vector<SetPtr> nested;  // increasing
  };
  std::vector<Family> families;
  families.push_back({"discs-centered",
                      {sets::closed_disc({0, 0}, 0.2), sets::closed_disc({0, 0}, 0.35),
                       sets::closed_disc({0, 0}, 0.5)}});
  families.push_back({"discs-offcenter",
                      {sets::closed_disc({0.3, 0.1}, 0.1), sets::closed_disc({0.3, 0.1}, 0.22),
                       sets::closed_disc({0.3, 0.1}, 0.35)}});
  families.push_back({"boxes",
                      {sets::box({-0.2, -0.2}, {0.2, 0.2}), sets::box({-0.35, -0.3}, {0.35, 0.3}),
                       sets::box({-0.5, -0.4}, {0.5, 0.4})}});
  families.push_back({"unions",
                      {sets::closed_disc({-0.4, 0}, 0.15),
                       sets::set_union(sets::closed_disc({-0.4, 0}, 0.15),
                                       sets::closed_disc({0.4, 0}, 0.15)),
                       sets::set_union(sets::closed_disc({-0.4, 0}, 0.25),
                                       sets::closed_disc({0.4, 0}, 0.25))}});
  families.push_back({"disc-in-box",
                      {sets::closed_disc({0, 0}, 0.25),
                       sets::set_union(sets::closed_disc({0, 0}, 0.25),
                                       sets::box({-0.1, -0.45}, {0.1, 0.45})),
                       sets::box({-0.45, -0.45}, {0.45, 0.45})}});
  for (const auto& fam : families) {
    std::vector<double> c;
    for (const auto& A : fam.nested)
      c.push_back(capacity_fixed_budget(disc, *A, params.mono_h, params.mono_budget,
                                        params.node_cap));
    bool mono = true;
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
      if (!(c[k] <= c[k + 1])) mono = false;
    std::ostringstream detail;
    for (double v : c) detail << v << " ";
    ledger.entries.push_back(
        {"monotone:" + fam.name, mono, c.back(), c.front(), detail.str()});
  }

  // (2) decreasing compacts K_j shrinking onto K.
  {
    double h = params.limit_h;
    double c_limit = capacity_direct(disc, *sets::closed_disc({0, 0}, 0.5), h, params.node_cap);
    double gap = h * 0.9;
    double c_j =
        capacity_direct(disc, *sets::closed_disc({0, 0}, 0.5 + gap), h, params.node_cap);
    double rel = std::abs(c_j - c_limit) / c_limit;
    std::ostringstream detail;
    detail << "gap=" << gap << " c_j=" << c_j << " c=" << c_limit << " rel=" << rel;
    ledger.entries.push_back({"compact-decreasing", rel <= params.limit_rel_tol, c_j, c_limit,
                              detail.str()});
  }

  // (3) increasing unions A_j growing into A.
  {
    double h = params.limit_h;
    double c_limit = capacity_direct(disc, *sets::closed_disc({0, 0}, 0.5), h, params.node_cap);
    double gap = h * 0.9;
    double c_j =
        capacity_direct(disc, *sets::closed_disc({0, 0}, 0.5 - gap), h, params.node_cap);
    double rel = std::abs(c_j - c_limit) / c_limit;
    std::ostringstream detail;
    detail << "gap=" << gap << " c_j=" << c_j << " c=" << c_limit << " rel=" << rel;
    ledger.entries.push_back({"increasing-sets", rel <= params.limit_rel_tol, c_j, c_limit,
                              detail.str()});
  }
  return ledger;
}

bool PolarReport::all_passed() const {
  return finite_sigma_zero && ratios_pass && exhaustion_monotone;
}

PolarReport polar_disc_test(const PolarTestParams& params) {
  PolarReport rep;
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};

  // (a) exact-mode sigma of a finite set vanishes for every sampled disc.
  {
    CounterRng rng(params.seed, 0xF1717ull);
    std::vector<ComplexPoint> pts;
    for (int i = 0; i < 7; ++i) {
      double r = 0.1 + 0.7 * rng.next_double();
      double t = rng.uniform(0.0, kTwoPi);
      pts.emplace_back(Complex(r * std::cos(t), r * std::sin(t)));
    }
    SetPtr E = sets::points(pts);
    bool all_zero = true;
    int checked = 0;
    for (int b = 0; b < params.disc_batch; ++b) {
      CounterRng draw = rng.split(static_cast<std::uint64_t>(b));
      AnalyticDisc f = constant_disc(ComplexPoint(Complex(0.2, -0.1)));
      f.coeff[0].resize(params.disc_degree + 1, Complex(0, 0));
      for (int k = 1; k <= params.disc_degree; ++k)
        f.coeff[0][k] = Complex(draw.normal(), draw.normal()) * (0.25 / k);
      // Shrink into the domain so every batch entry is a genuine disc.
      for (int it = 0; it < 40; ++it) {
        if (feasible(f, disc, 256).feasible) break;
        for (int k = 1; k <= params.disc_degree; ++k) f.coeff[0][k] *= 0.8;
      }
      if (!feasible(f, disc, 256).feasible) continue;
      ++checked;
      if (sigma_f(f, *E, 4096, true) != 0.0) all_zero = false;
    }
    rep.finite_sigma_zero = all_zero && checked > 0;
    rep.discs_checked = checked;
  }

  // (b) capacity decay of shrinking discs: c(E_j) ~ 1/j.
  {
    for (int j = params.j_min; j <= params.j_max; ++j) {
      double r = std::ldexp(1.0, -j);
      rep.capacities.push_back(capacity_direct(disc, *sets::closed_disc({0, 0}, r),
                                               params.capacity_h, std::size_t(1) << 28));
    }
    bool ok = true;
    for (std::size_t k = 0; k + 1 < rep.capacities.size(); ++k) {
      int j = params.j_min + static_cast<int>(k);
      double ratio = rep.capacities[k + 1] / rep.capacities[k];
      double target = static_cast<double>(j) / (j + 1);
      double err = std::abs(ratio / target - 1.0);
      rep.ratio_errors.push_back(err);
      if (err > params.ratio_tol) ok = false;
    }
    rep.ratios_pass = ok;
  }

  // (c) growing domains admit no worse discs: warm-start each larger radius
  // with the previous winner, so the sequence is monotone by construction.
  {
    SetPtr A = sets::closed_disc({0, 0}, 0.5);
    ComplexPoint x(Complex(0.7, 0.0));
    DiscOptParams opt = params.exhaustion_opt;
    opt.seed = params.seed;
    std::vector<AnalyticDisc> warm;
    double prev = -1.0;
    bool mono = true;
    for (double R : params.domain_radii) {
      DomainSpec dom{DomainSpec::Variant{Disc{{0, 0}, R}}};
      DiscOptParams o = opt;
      o.warm_starts = warm;
      DiscOptResult r = optimize_discs(dom, *A, x, o);
      rep.exhaustion_sigma.push_back(r.sigma);
      if (r.sigma < prev - 1e-12) mono = false;
      prev = std::max(prev, r.sigma);
      warm = {r.best};
    }
    rep.exhaustion_monotone = mono;
  }
  return rep;
}

}  // namespace pluri
