#include "pluri/discs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace pluri {

namespace {

Complex unit(double theta) { return Complex(std::cos(theta), std::sin(theta)); }

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc(0, 0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

ComplexPoint AnalyticDisc::center() const {
  if (dim == 1) return ComplexPoint(coeff[0].empty() ? Complex(0) : coeff[0][0]);
  return ComplexPoint(coeff[0].empty() ? Complex(0) : coeff[0][0],
                      coeff[1].empty() ? Complex(0) : coeff[1][0]);
}

int AnalyticDisc::degree() const {
  std::size_t d = 0;
  for (const auto& c : coeff) d = std::max(d, c.empty() ? 0 : c.size() - 1);
  return static_cast<int>(d);
}

AnalyticDisc constant_disc(const ComplexPoint& x) {
  AnalyticDisc f;
  f.dim = x.dim();
  f.coeff.resize(x.dim());
  for (int i = 0; i < x.dim(); ++i) f.coeff[i] = {x.coord(i)};
  return f;
}

ComplexPoint eval_disc(const AnalyticDisc& f, Complex z) {
  if (f.dim == 1) return ComplexPoint(horner(f.coeff[0], z));
  return ComplexPoint(horner(f.coeff[0], z), horner(f.coeff[1], z));
}

namespace {

double gauge_max(const AnalyticDisc& f, const DomainSpec& X, int M) {
  double mx = 0.0;
  for (int j = 0; j < M; ++j) {
    double theta = kTwoPi * j / M;
    mx = std::max(mx, X.gauge(eval_disc(f, unit(theta))));
  }
  return mx;
}

// Winding number of f - w0 over the circle; used to certify zero-freeness for
// annulus targets where the inner gauge is only subharmonic off the zeros.
int winding_number(const AnalyticDisc& f, Complex w0, int M) {
  double total = 0.0;
  Complex prev = horner(f.coeff[0], unit(0.0)) - w0;
  for (int j = 1; j <= M; ++j) {
    Complex cur = horner(f.coeff[0], unit(kTwoPi * j / M)) - w0;
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

Feasibility feasible(const AnalyticDisc& f, const DomainSpec& X, int M) {
  if (M < 64) throw ValidationError("feasibility requires at least 64 boundary samples");
  if (f.dim != X.dim()) throw DimensionError("disc dimension does not match domain");
  double mx = gauge_max(f, X, M);
  bool ok = mx <= 1.0;
  if (ok && std::holds_alternative<Annulus>(X.variant())) {
    // The hole gauge needs f zero-free on the closed disc.
    ok = winding_number(f, Complex(0, 0), M) == 0;
  }
  return Feasibility{ok, 1.0 - mx};
}

// ---------------------------------------------------------------------------
// sigma_f

bool sigma_exact_supported(const AnalyticDisc& f, const SetExpr& A) {
  if (f.dim != 1 || A.dim() != 1) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClosedDiscSet> || std::is_same_v<T, OpenDiscSet> ||
                      std::is_same_v<T, BoxSet> || std::is_same_v<T, FinitePointsSet>) {
          return true;
        } else if constexpr (std::is_same_v<T, UnionSet> || std::is_same_v<T, IntersectionSet>) {
          return sigma_exact_supported(f, *s.a) && sigma_exact_supported(f, *s.b);
        } else if constexpr (std::is_same_v<T, ComplementSet>) {
          return sigma_exact_supported(f, *s.a);
        } else {
          return false;
        }
      },
      A.variant());
}

double sigma_f(const AnalyticDisc& f, const SetExpr& A, int M, bool exact_mode) {
  if (A.dim() != f.dim) throw DimensionError("set dimension does not match disc dimension");
  if (M < 4) throw ValidationError("sigma_f needs at least 4 samples");
  auto inside = [&](double theta) { return member(A, eval_disc(f, unit(theta))); };

  std::vector<char> memb(M);
  int count = 0;
  for (int j = 0; j < M; ++j) {
    double theta = kTwoPi * (j + 0.5) / M;
    memb[j] = inside(theta) ? 1 : 0;
    count += memb[j];
  }
  if (!exact_mode || f.dim != 1 || !sigma_exact_supported(f, A)) {
    return static_cast<double>(count) / M;
  }
  if (count == 0) return 0.0;
  if (count == M) return 1.0;

  // Locate one transition in every sample gap whose endpoints disagree and
  // accumulate the member runs between consecutive transitions.
  std::vector<double> crossing;   // ascending angles
  std::vector<char> state_after;  // membership just above the crossing
  for (int j = 0; j < M; ++j) {
    int jn = (j + 1) % M;
    if (memb[j] == memb[jn]) continue;
    double lo = kTwoPi * (j + 0.5) / M;
    double hi = jn == 0 ? kTwoPi * (M + 0.5) / M : kTwoPi * (jn + 0.5) / M;
    bool lo_in = memb[j];
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      if (inside(mid) == lo_in)
        lo = mid;
      else
        hi = mid;
    }
    double c = 0.5 * (lo + hi);
    if (c >= kTwoPi) c -= kTwoPi;
    crossing.push_back(c);
    state_after.push_back(memb[jn]);
  }
  // Sort crossings (wrap may have put the last one first).
  std::vector<std::size_t> order(crossing.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return crossing[a] < crossing[b]; });
  CompensatedSum measure;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t cur = order[k];
    std::size_t nxt = order[(k + 1) % order.size()];
    if (!state_after[cur]) continue;
    double width = crossing[nxt] - crossing[cur];
    if (width <= 0) width += kTwoPi;
    measure.add(width / kTwoPi);
  }
  return std::min(1.0, std::max(0.0, measure.value()));
}

// ---------------------------------------------------------------------------
// Optimizer

namespace {

struct Objective {
  const DomainSpec& X;
  const SetExpr& A;
  int M;
  bool exact;
  double target_gauge;  // internal feasibility target with Bernstein slack
  mutable long evals = 0;

  double shrink_and_eval(AnalyticDisc& f) const {
    // Scale all non-constant coefficients toward the center until the sampled
    // gauge falls under the target; the sampled max is convex in the scale.
    double g = gauge_max(f, X, M);
    if (g > target_gauge) {
      double lo = 0.0, hi = 1.0;
      AnalyticDisc trial = f;
      for (int it = 0; it < 50; ++it) {
        double t = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < f.coeff.size(); ++i)
          for (std::size_t k = 1; k < f.coeff[i].size(); ++k)
            trial.coeff[i][k] = f.coeff[i][k] * t;
        if (gauge_max(trial, X, M) <= target_gauge)
          lo = t;
        else
          hi = t;
      }
      for (std::size_t i = 0; i < f.coeff.size(); ++i)
        for (std::size_t k = 1; k < f.coeff[i].size(); ++k) f.coeff[i][k] *= lo;
    }
    ++evals;
    return sigma_f(f, A, M, exact);
  }
};

AnalyticDisc blank_disc(const ComplexPoint& x, int degree) {
  AnalyticDisc f = constant_disc(x);
  for (auto& c : f.coeff) c.resize(degree + 1, Complex(0, 0));
  return f;
}

// Seed with the truncated exponential of an arc's analytic completion: the
// boundary modulus dips on an arc of prescribed measure while f(0) stays
// pinned at x. Only meaningful in dim 1.
AnalyticDisc structured_seed(const ComplexPoint& x, const DomainSpec& X, int degree,
                             double arc_measure_target) {
  double gx = std::max(X.gauge(x), 1e-6);
  double lambda = std::log(1.0 / gx) / arc_measure_target * 0.95;
  double center_angle = std::arg(x.z1() == Complex(0, 0) ? Complex(1, 0) : x.z1()) + kTwoPi / 2;
  double alpha = center_angle - arc_measure_target * kTwoPi / 2;
  double beta = center_angle + arc_measure_target * kTwoPi / 2;
  // F(z) = -lambda * 2 sum_k g_k z^k with g_k the arc indicator coefficients.
  std::vector<Complex> F(degree + 1, Complex(0, 0));
  for (int k = 1; k <= degree; ++k) {
    Complex gk = (std::exp(Complex(0, -k * alpha)) - std::exp(Complex(0, -k * beta))) /
                 Complex(0, kTwoPi * k);
    F[k] = -2.0 * lambda * gk;
  }
  // c = x * exp(F) by the series recurrence c_n = (1/n) sum k F_k c_{n-k}.
  std::vector<Complex> c(degree + 1, Complex(0, 0));
  c[0] = x.z1();
  for (int n = 1; n <= degree; ++n) {
    Complex acc(0, 0);
    for (int k = 1; k <= n; ++k) acc += static_cast<double>(k) * F[k] * c[n - k];
    c[n] = acc / static_cast<double>(n);
  }
  AnalyticDisc f;
  f.dim = 1;
  f.coeff = {std::move(c)};
  return f;
}

struct RestartOutcome {
  AnalyticDisc disc;
  double sigma = -1.0;
  long evals = 0;
  std::string kind;
};

RestartOutcome run_restart(AnalyticDisc start, std::string kind, const Objective& obj,
                           long budget) {
  RestartOutcome out;
  out.kind = std::move(kind);
  AnalyticDisc cur = std::move(start);
  double cur_sigma = obj.shrink_and_eval(cur);
  long evals = 1;
  const int dim = cur.dim;
  const int degree = static_cast<int>(cur.coeff[0].size()) - 1;

  double step = 0.25;
  while (step >= 1e-4 && evals < budget) {
    bool improved = false;
    for (int i = 0; i < dim && evals < budget; ++i) {
      for (int k = 1; k <= degree && evals < budget; ++k) {
        for (int part = 0; part < 2 && evals < budget; ++part) {
          for (double sgn : {+1.0, -1.0}) {
            if (evals >= budget) break;
            AnalyticDisc cand = cur;
            Complex delta = part == 0 ? Complex(sgn * step, 0) : Complex(0, sgn * step);
            cand.coeff[i][k] += delta;
            double s = obj.shrink_and_eval(cand);
            ++evals;
            if (s > cur_sigma) {
              cur = std::move(cand);
              cur_sigma = s;
              improved = true;
              break;
            }
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  out.disc = std::move(cur);
  out.sigma = cur_sigma;
  out.evals = evals;
  return out;
}

}  // namespace

DiscOptResult optimize_discs(const DomainSpec& X, const SetExpr& A, const ComplexPoint& x,
                             const DiscOptParams& params) {
  if (!X.contains(x)) throw ValidationError("disc center must be interior to the domain");
  if (A.dim() != X.dim()) throw DimensionError("set dimension does not match domain dimension");
  if (params.degree < 1) throw ValidationError("degree must be >= 1");
  if (params.restarts < 1) throw ValidationError("restarts must be >= 1");

  const int Ml = std::max(64, params.loop_samples);
  const double bernstein = 1.0 - kTwoPi / 2.0 * params.degree / Ml;
  Objective obj{X, A, Ml, params.exact_sigma, (1.0 - params.shrink_margin) * bernstein, 0};

  // Candidate starts: constant baseline, warm starts, structured dips (dim 1),
  // then seeded random draws.
  struct Start {
    AnalyticDisc disc;
    std::string kind;
  };
  std::vector<Start> starts;
  starts.push_back({blank_disc(x, params.degree), "constant"});
  for (const auto& w : params.warm_starts) {
    AnalyticDisc f = w;
    for (auto& c : f.coeff) c.resize(params.degree + 1, Complex(0, 0));
    starts.push_back({std::move(f), "warm"});
  }
  if (X.dim() == 1) {
    for (double target : {0.3, 0.45, 0.6, 0.75}) {
      if (static_cast<int>(starts.size()) >= params.restarts) break;
      starts.push_back({structured_seed(x, X, params.degree, target), "structured"});
    }
  }
  CounterRng root(params.seed, 0x5EEDull);
  int r_index = 0;
  while (static_cast<int>(starts.size()) < params.restarts) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(r_index++));
    AnalyticDisc f = blank_disc(x, params.degree);
    double scale = 0.6 * std::max(0.05, 1.0 - X.gauge(x));
    for (auto& c : f.coeff)
      for (std::size_t k = 1; k < c.size(); ++k)
        c[k] = Complex(rng.normal(), rng.normal()) * (scale / static_cast<double>(k));
    starts.push_back({std::move(f), "random"});
  }

  const int n = static_cast<int>(starts.size());
  std::vector<RestartOutcome> outcomes(n);
  int hw = params.threads > 0 ? params.threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) break;
      Objective local = obj;  // per-thread eval counter
      outcomes[i] = run_restart(starts[i].disc, starts[i].kind, local, params.budget);
      outcomes[i].evals = local.evals;
    }
  };
  if (hw == 1 || n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(hw, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  DiscOptResult res;
  res.seed = params.seed;
  res.samples = params.samples;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    res.restart_log.push_back({i, outcomes[i].kind, outcomes[i].sigma, outcomes[i].evals});
    res.total_evals += outcomes[i].evals;
    if (outcomes[i].sigma > outcomes[best_i].sigma) best_i = i;
  }
  res.best = outcomes[best_i].disc;
  // Re-evaluate the winner at full resolution and certify feasibility.
  res.sigma = sigma_f(res.best, A, params.samples, params.exact_sigma);
  Feasibility fz = feasible(res.best, X, params.samples);
  if (!fz.feasible) {
    // The Bernstein slack makes this unreachable; keep the guaranteed fallback.
    res.best = constant_disc(x);
    res.sigma = sigma_f(res.best, A, params.samples, params.exact_sigma);
    fz = feasible(res.best, X, params.samples);
  }
  res.margin = fz.margin;
  res.omega_upper = -res.sigma;
  return res;
}

// ---------------------------------------------------------------------------
// BivariateDisc

int BivariateDisc::z_degree() const {
  std::size_t d = 0;
  for (const auto& c : coeff) d = std::max(d, c.empty() ? 0 : c.size() - 1);
  return static_cast<int>(d);
}

int BivariateDisc::w_degree() const {
  std::size_t d = 0;
  for (const auto& c : coeff)
    for (const auto& row : c) d = std::max(d, row.empty() ? 0 : row.size() - 1);
  return static_cast<int>(d);
}

ComplexPoint BivariateDisc::eval(Complex z, Complex w) const {
  std::array<Complex, 2> out{Complex(0, 0), Complex(0, 0)};
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    Complex acc(0, 0);
    for (auto it = coeff[i].rbegin(); it != coeff[i].rend(); ++it) acc = acc * z + horner(*it, w);
    out[i] = acc;
  }
  return dim == 1 ? ComplexPoint(out[0]) : ComplexPoint(out[0], out[1]);
}

AnalyticDisc BivariateDisc::slice_at_zero() const {
  AnalyticDisc h;
  h.dim = dim;
  for (const auto& c : coeff) h.coeff.push_back(c.empty() ? std::vector<Complex>{} : c[0]);
  return h;
}

AnalyticDisc radial_twist(const BivariateDisc& F, int k, double theta) {
  if (k < 0) throw ValidationError("twist exponent must be >= 0");
  AnalyticDisc g;
  g.dim = F.dim;
  g.coeff.resize(F.coeff.size());
  for (std::size_t i = 0; i < F.coeff.size(); ++i) {
    std::size_t maxlen = 1;
    for (std::size_t p = 0; p < F.coeff[i].size(); ++p)
      maxlen = std::max(maxlen, p * static_cast<std::size_t>(k + 1) +
                                    (F.coeff[i][p].empty() ? 0 : F.coeff[i][p].size() - 1) + 1);
    g.coeff[i].assign(maxlen, Complex(0, 0));
    for (std::size_t p = 0; p < F.coeff[i].size(); ++p) {
      Complex phase = std::exp(Complex(0, theta * static_cast<double>(p)));
      for (std::size_t q = 0; q < F.coeff[i][p].size(); ++q)
        g.coeff[i][p * (k + 1) + q] += F.coeff[i][p][q] * phase;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Fubini theta selection

double twist_slice_measure(const TorusSet& C, int k, double theta) {
  double shift = theta / kTwoPi;
  CompensatedSum total;
  for (const auto& r : C.rects()) {
    TorusArcs I = TorusArcs::from_intervals({r.i});
    TorusArcs J = TorusArcs::from_intervals({r.j});
    TorusArcs pre = I.preimage_multiply(k + 1, shift);
    total.add(pre.intersect(J).measure());
  }
  return total.value();
}

ThetaChoice choose_theta(const TorusSet& C, int k, int T) {
  if (T < 256) throw ValidationError("theta grid must have at least 256 points");
  if (k < 0) throw ValidationError("twist exponent must be >= 0");
  ThetaChoice out;
  double sigma2 = C.measure();
  if (sigma2 <= 0.0 || C.rects().empty()) return out;
  CompensatedSum mean;
  double best = -1.0;
  double best_theta = 0.0;
  for (int i = 0; i < T; ++i) {
    double theta = kTwoPi * i / T;
    double s = twist_slice_measure(C, k, theta);
    mean.add(s);
    if (s > best) {
      best = s;
      best_theta = theta;
    }
  }
  out.theta = best_theta;
  out.sigma = best;
  out.grid_mean = mean.value() / T;
  out.slack = std::max(0.0, sigma2 - best);
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing profile and gluing

double SmoothingProfile::eval_turns(double t) const {
  if (c_.empty()) return 0.0;
  double theta = kTwoPi * t;
  double v = c_[0].real();
  for (std::size_t k = 1; k < c_.size(); ++k) {
    Complex e = unit(theta * static_cast<double>(k));
    v += 2.0 * (c_[k] * e).real();
  }
  return std::min(1.0, std::max(0.0, v));
}

SmoothingBuild make_smoothing_profile(const std::vector<TorusInterval>& arcs,
                                      double plateau_fraction, int degree) {
  if (!(plateau_fraction > 0.0) || !(plateau_fraction < 1.0))
    throw ValidationError("plateau fraction must be in (0,1)");
  if (degree < 4) throw ValidationError("smoothing profile degree must be >= 4");
  auto canon = TorusArcs::from_intervals(arcs).intervals();
  const double ramp = (1.0 - plateau_fraction) / 2.0;
  auto raw = [&](double t) -> double {
    for (const auto& a : canon) {
      double u = t - a.lo;
      if (u < 0) u += 1.0;
      if (u > a.len) continue;
      double s = u / a.len;
      if (s < ramp) return 0.5 * (1.0 - std::cos(kTwoPi / 2.0 * s / ramp));
      if (s > 1.0 - ramp) return 0.5 * (1.0 - std::cos(kTwoPi / 2.0 * (1.0 - s) / ramp));
      return 1.0;
    }
    return 0.0;
  };
  const int N = std::max(8 * (degree + 1), 1024);
  std::vector<double> samples(N);
  for (int n = 0; n < N; ++n) samples[n] = raw(static_cast<double>(n) / N);
  std::vector<Complex> c(degree + 1, Complex(0, 0));
  for (int k = 0; k <= degree; ++k) {
    Complex acc(0, 0);
    for (int n = 0; n < N; ++n)
      acc += samples[n] * unit(-kTwoPi * k * static_cast<double>(n) / N);
    c[k] = acc / static_cast<double>(N);
  }
  // Affine renormalization keeps sampled values inside [0,1].
  SmoothingProfile fit(c);
  double mn = 1e300, mx = -1e300;
  const int D = 4 * N;
  for (int n = 0; n < D; ++n) {
    double theta = kTwoPi * n / D;
    double v = fit.coeffs()[0].real();
    for (std::size_t k = 1; k < fit.coeffs().size(); ++k)
      v += 2.0 * (fit.coeffs()[k] * unit(theta * static_cast<double>(k))).real();
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  if (mx > mn) {
    double scale = 1.0 / (mx - mn);
    c[0] = Complex((c[0].real() - mn) * scale, 0.0);
    for (int k = 1; k <= degree; ++k) c[k] *= scale;
  }
  SmoothingBuild out;
  out.profile = SmoothingProfile(std::move(c));
  for (const auto& a : canon)
    out.plateaus.push_back({a.lo + ramp * a.len, plateau_fraction * a.len});
  double pmin = 1.0, omax = 0.0;
  TorusArcs arcset = TorusArcs::from_intervals(canon);
  for (int n = 0; n < D; ++n) {
    double t = static_cast<double>(n) / D;
    double v = out.profile.eval_turns(t);
    bool on_plateau = false;
    for (const auto& p : out.plateaus)
      if (t >= p.lo && t <= p.hi()) on_plateau = true;
    if (on_plateau) pmin = std::min(pmin, v);
    if (!arcset.contains(t)) omax = std::max(omax, v);
  }
  out.plateau_min = pmin;
  out.off_max = omax;
  return out;
}

void GluingSpec::validate() const {
  if (base.coeff.empty()) throw ValidationError("gluing base disc is empty");
  // Patch arcs must be disjoint.
  std::vector<TorusInterval> all;
  double total = 0.0;
  for (const auto& p : patches) {
    all.push_back(p.arc);
    total += p.arc.len;
  }
  if (!all.empty()) {
    double merged = TorusArcs::from_intervals(all).measure();
    if (merged < total - 1e-12) throw ValidationError("gluing arcs must be disjoint");
  }
  // Each local map's z-constant slice must match the base on its arc.
  const int S = 64;
  for (const auto& p : patches) {
    for (int s = 0; s < S; ++s) {
      double t = p.arc.lo + p.arc.len * (s + 0.5) / S;
      Complex w = unit(kTwoPi * t);
      ComplexPoint a = p.local.eval(Complex(0, 0), w);
      ComplexPoint b = eval_disc(base, w);
      double d = std::abs(a.z1() - b.z1());
      if (base.dim == 2) d = std::max(d, std::abs(a.z2() - b.z2()));
      if (d > pin_tol)
        throw ValidationError("local map slice deviates from the base disc beyond pin_tol");
    }
  }
}

GlueResult glue(const GluingSpec& spec, int truncation_degree) {
  spec.validate();
  const int Q = truncation_degree;
  if (Q < 1) throw ValidationError("truncation degree must be >= 1");
  const int dim = spec.base.dim;
  int dzmax = 0;
  for (const auto& p : spec.patches) dzmax = std::max(dzmax, p.local.z_degree());

  GlueResult out;
  out.base_twist = Q;
  out.glued.dim = dim;
  out.glued.coeff.assign(dim, {});

  const int W = std::max(8 * (Q + 1), 1024);
  // Target z-coefficient profiles gamma_p,i on the circle.
  auto target = [&](int i, int p, double t) -> Complex {
    Complex w = unit(kTwoPi * t);
    for (const auto& patch : spec.patches) {
      double u = t - patch.arc.lo;
      if (u < 0) u += 1.0;
      if (u <= patch.arc.len) {
        const auto& rows = patch.local.coeff[i];
        Complex cpw = p < static_cast<int>(rows.size()) ? horner(rows[p], w) : Complex(0, 0);
        if (p == 0) return cpw;
        double r = spec.rho.eval_turns(t);
        return cpw * std::pow(r, p);
      }
    }
    if (p == 0) return horner(spec.base.coeff[i], w);
    return Complex(0, 0);
  };

  for (int i = 0; i < dim; ++i) {
    auto& rows = out.glued.coeff[i];
    rows.assign(dzmax + 1, {});
    // p = 0 row pinned to the base disc exactly.
    rows[0] = spec.base.coeff[i];
    for (int p = 1; p <= dzmax; ++p) {
      std::vector<Complex> samples(W);
      for (int n = 0; n < W; ++n) samples[n] = target(i, p, static_cast<double>(n) / W);
      // Laurent coefficients -Q..Q, stored at w-exponent q + p*Q >= 0.
      std::vector<Complex> row(static_cast<std::size_t>(p) * Q + Q + 1, Complex(0, 0));
      for (int q = -Q; q <= Q; ++q) {
        Complex acc(0, 0);
        for (int n = 0; n < W; ++n)
          acc += samples[n] * unit(-kTwoPi * q * static_cast<double>(n) / W);
        row[static_cast<std::size_t>(q + p * Q)] = acc / static_cast<double>(W);
      }
      rows[p] = std::move(row);
    }
  }

  // Residual: sup over offset samples of the summed per-power mismatch, with
  // the stored rows read back through the recorded twist.
  double resid = 0.0;
  double scale = 0.0;
  for (int n = 0; n < 2 * W; ++n) {
    double t = (n + 0.5) / (2.0 * W);
    Complex w = unit(kTwoPi * t);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int p = 0; p <= dzmax; ++p) {
        Complex tgt = target(i, p, t);
        const auto& row = out.glued.coeff[i][p];
        Complex fit = horner(row, w);
        if (p > 0) fit *= std::pow(std::conj(w), p * Q);  // undo the stored twist on |w|=1
        total += std::abs(fit - tgt);
        if (p > 0) scale = std::max(scale, std::abs(tgt));
      }
    }
    resid = std::max(resid, total);
  }
  out.residual = resid;
  out.scale = scale;
  out.flagged = scale > 0.0 ? resid > spec.residual_tol * scale : resid > spec.residual_tol;
  return out;
}

// ---------------------------------------------------------------------------

DiscBoundReport verify_disc_bound_with_field(const GridField& envelope_field, const DomainSpec& X,
                                  const SetExpr& A, const ComplexPoint& x, double tol,
                                  const DiscOptParams& opt, bool check_equality,
                                  double tol_lower) {
  DiscBoundReport rep;
  rep.tol = tol;
  rep.tol_lower = tol_lower;
  rep.omega_est = interpolate(envelope_field, x);
  DiscOptResult best = optimize_discs(X, A, x, opt);
  rep.sigma_best = best.sigma;
  rep.omega_upper = best.omega_upper;
  rep.pass_upper = rep.omega_upper <= rep.omega_est + tol;
  rep.pass_lower = rep.omega_upper >= rep.omega_est - tol_lower;
  if (check_equality) rep.pass_equality = std::abs(rep.omega_upper - rep.omega_est) <= tol;
  return rep;
}

DiscBoundReport verify_disc_bound(const DomainSpec& X, const SetExpr& A, const ComplexPoint& x, double tol,
                       const SolverParams& solver, const DiscOptParams& opt, bool check_equality,
                       double tol_lower) {
  GridPtr grid = make_grid(X, solver);
  GridField obstacle = build_obstacle(X, A, grid);
  EnvelopeResult env =
      psh_envelope(obstacle, grid->directions(), solver.tol, solver.max_iter, solver.mode);
  return verify_disc_bound_with_field(env.field, X, A, x, tol, opt, check_equality, tol_lower);
}

}  // namespace pluri
