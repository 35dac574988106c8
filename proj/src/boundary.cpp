#include "pluri/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace pluri {

namespace {

Complex unit(double theta) { return Complex(std::cos(theta), std::sin(theta)); }

// Increasing antiderivative of the Poisson kernel P_r at angle offset phi:
// H'(phi) = (1-r^2)/(1 - 2r cos(phi) + r^2), H(phi + 2pi) = H(phi) + 2pi.
double poisson_antiderivative(double r, double phi) {
  double k = std::floor((phi + kTwoPi / 2) / kTwoPi);
  double phi0 = phi - kTwoPi * k;  // (-pi, pi]
  double val = 2.0 * std::atan2((1.0 + r) * std::sin(phi0 / 2), (1.0 - r) * std::cos(phi0 / 2));
  return val + kTwoPi * k;
}

// Harmonic measure of one arc [alpha, beta] (radians) at z, |z| < 1.
double arc_harmonic_measure(Complex z, double alpha, double beta) {
  double r = std::abs(z);
  double t = std::atan2(z.imag(), z.real());
  return (poisson_antiderivative(r, beta - t) - poisson_antiderivative(r, alpha - t)) / kTwoPi;
}

}  // namespace

double poisson(Complex z, const TorusArcs& U) {
  if (!(std::abs(z) < 1.0)) throw ValidationError("poisson probe must satisfy |z| < 1");
  CompensatedSum s;
  for (const auto& a : U.intervals()) {
    double alpha = kTwoPi * a.lo;
    double beta = alpha + kTwoPi * a.len;
    s.add(arc_harmonic_measure(z, alpha, beta));
  }
  return -std::min(1.0, std::max(0.0, s.value()));
}

double poisson(Complex z, const SetExpr& U) { return poisson(z, to_torus_arcs(U)); }

OmegaBoundaryResult omega_boundary(const BoundarySplit& A, Complex z) {
  if (!(std::abs(z) < 1.0)) throw ValidationError("probe must satisfy |z| < 1");
  OmegaBoundaryResult out;
  double prev = -1.0;
  double value = -1.0;
  int steps = 0;
  for (int j = 1; j <= 40; ++j) {
    double eps = std::ldexp(1.0, -j);  // in turns
    TorusArcs enlarged = A.arcs.enlarge(eps);
    for (double t : A.point_angles)
      enlarged = enlarged.unite(TorusArcs::from_intervals({{t - eps, 2 * eps}}));
    prev = value;
    value = poisson(z, enlarged);
    ++steps;
  }
  out.value = value;
  out.last_gap = std::abs(value - prev);
  out.steps = steps;
  return out;
}

OmegaBoundaryResult omega_boundary(const SetExpr& A, Complex z) {
  return omega_boundary(split_boundary_set(A), z);
}

// ---------------------------------------------------------------------------
// Blaschke products

Complex BlaschkeDisc::eval(Complex z) const {
  Complex acc = unit(phase);
  for (Complex a : zeros) acc *= (z - a) / (1.0 - std::conj(a) * z);
  return acc;
}

Complex BlaschkeDisc::at_zero() const {
  Complex acc = unit(phase);
  for (Complex a : zeros) acc *= -a;
  return acc;
}

void BlaschkeDisc::validate() const {
  for (Complex a : zeros)
    if (!(std::abs(a) < 1.0)) throw ValidationError("Blaschke zeros must satisfy |a| < 1");
  for (int j = 0; j < 257; ++j) {
    double theta = kTwoPi * j / 257;
    if (std::abs(std::abs(eval(unit(theta))) - 1.0) > 1e-12)
      throw ValidationError("Blaschke product is not unimodular on the circle");
  }
}

BlaschkeDisc mobius_through(Complex x) {
  if (!(std::abs(x) < 1.0)) throw ValidationError("automorphism target must satisfy |x| < 1");
  BlaschkeDisc b;
  if (x == Complex(0, 0)) {
    b.phase = 0.0;
    b.zeros = {Complex(0, 0)};
    return b;
  }
  // b(z) = e^{i phase}(z + a)/(1 + conj(a) z) with a = x e^{-i phase}; choose
  // phase = arg x so a = |x| and b(0) = x.
  double ph = std::atan2(x.imag(), x.real());
  b.phase = ph;
  b.zeros = {Complex(-std::abs(x), 0.0)};
  return b;
}

namespace {

// Unwrapped boundary argument of B at a dense monotone sample grid. The
// boundary argument of a degree-m product increases by 2*pi*m over one loop.
struct ArgTrack {
  const BlaschkeDisc& B;
  std::vector<double> theta;
  std::vector<double> psi;  // unwrapped arg B(e^{i theta})

  explicit ArgTrack(const BlaschkeDisc& b) : B(b) {
    double slope_bound = 0.0;
    for (Complex a : b.zeros) slope_bound += (1.0 + std::abs(a)) / (1.0 - std::abs(a));
    int N = std::max(4096, 8 * static_cast<int>(std::ceil(slope_bound)));
    theta.resize(N + 1);
    psi.resize(N + 1);
    double prev_raw = std::arg(B.eval(unit(0.0)));
    double acc = prev_raw;
    theta[0] = 0.0;
    psi[0] = acc;
    for (int j = 1; j <= N; ++j) {
      theta[j] = kTwoPi * j / N;
      double raw = std::arg(B.eval(unit(theta[j])));
      double d = raw - prev_raw;
      while (d < -kTwoPi / 2) d += kTwoPi;
      while (d > kTwoPi / 2) d -= kTwoPi;
      acc += d;
      psi[j] = acc;
      prev_raw = raw;
    }
  }

  // theta with psi(theta) = y, assuming psi[lo_idx] <= y <= psi[lo_idx+1].
  double invert_in(int idx, double y) const {
    double lo = theta[idx], hi = theta[idx + 1];
    double psi_lo = psi[idx];
    Complex b_lo = B.eval(unit(lo));
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      double mid = 0.5 * (lo + hi);
      double pm = psi_lo + std::arg(B.eval(unit(mid)) / b_lo);
      if (pm <= y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Preimage angle of level y, or nothing if outside [psi.front(), psi.back()].
  std::optional<double> invert(double y) const {
    if (y < psi.front() || y > psi.back()) return std::nullopt;
    auto it = std::upper_bound(psi.begin(), psi.end(), y);
    int idx = static_cast<int>(it - psi.begin()) - 1;
    idx = std::max(0, std::min(idx, static_cast<int>(psi.size()) - 2));
    return invert_in(idx, y);
  }
};

}  // namespace

double blaschke_sigma(const BlaschkeDisc& B, const TorusArcs& A) {
  if (B.degree() == 0) {
    // Constant unimodular map: everything or nothing.
    double t = std::arg(unit(B.phase)) / kTwoPi;
    return A.contains(t) ? 1.0 : 0.0;
  }
  B.validate();
  ArgTrack track(B);
  const double lo = track.psi.front();
  const double hi = track.psi.back();  // lo + 2 pi m
  CompensatedSum total;
  for (const auto& arc : A.intervals()) {
    double alpha = kTwoPi * arc.lo;
    double beta = alpha + kTwoPi * arc.len;
    // Shift levels into [lo, hi] and accumulate each winding copy.
    long k0 = static_cast<long>(std::floor((lo - beta) / kTwoPi));
    for (long k = k0; alpha + kTwoPi * static_cast<double>(k) <= hi; ++k) {
      double a = alpha + kTwoPi * static_cast<double>(k);
      double b = beta + kTwoPi * static_cast<double>(k);
      double a_cl = std::max(a, lo);
      double b_cl = std::min(b, hi);
      if (b_cl <= a_cl) continue;
      double ta = *track.invert(a_cl);
      double tb = *track.invert(b_cl);
      total.add((tb - ta) / kTwoPi);
    }
  }
  return std::min(1.0, std::max(0.0, total.value()));
}

double blaschke_sigma(const BlaschkeDisc& B, const SetExpr& A) {
  return blaschke_sigma(B, to_torus_arcs(A));
}

// ---------------------------------------------------------------------------

BoundaryEqualityReport verify_boundary_equality(Complex x, const SetExpr& U, int degree_cap, std::uint64_t seed,
                       int search_count) {
  TorusArcs arcs = to_torus_arcs(U);
  BoundaryEqualityReport rep;
  rep.x = x;
  rep.poisson_value = poisson(x, arcs);
  BlaschkeDisc phi = mobius_through(x);
  rep.mobius_sigma = blaschke_sigma(phi, arcs);
  rep.equality_gap = std::abs(rep.poisson_value + rep.mobius_sigma);

  CounterRng rng(seed, 0xB1A5ull);
  double excess = 0.0;
  int searched = 0;
  for (int s = 0; s < search_count; ++s) {
    int m = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(
                                    std::max(1, degree_cap)));
    // Zeros with |prod a_j| = |x| so the product can be phased to pass x at 0.
    std::vector<Complex> zeros(m);
    double log_prod = 0.0;
    for (int j = 0; j < m; ++j) {
      double r = 0.15 + 0.7 * rng.next_double();
      zeros[j] = r * unit(rng.uniform(0.0, kTwoPi));
      log_prod += std::log(r);
    }
    double ax = std::abs(x);
    if (ax == 0.0) {
      zeros[0] = Complex(0, 0);
    } else {
      double t = std::log(ax) / log_prod;
      if (!(t > 0.0)) continue;
      for (auto& a : zeros) a = std::pow(std::abs(a), t - 1.0) * a;
      bool ok = true;
      for (auto& a : zeros)
        if (!(std::abs(a) < 0.999)) ok = false;
      if (!ok) continue;
    }
    BlaschkeDisc B;
    B.zeros = zeros;
    Complex prod(1, 0);
    for (Complex a : zeros) prod *= -a;
    if (ax > 0.0) {
      B.phase = std::atan2((x / prod).imag(), (x / prod).real());
    } else {
      B.phase = rng.uniform(0.0, kTwoPi);
    }
    double sb = blaschke_sigma(B, arcs);
    excess = std::max(excess, sb - rep.mobius_sigma);
    ++searched;
  }
  rep.best_search_excess = excess;
  rep.searched = searched;
  rep.pass = rep.equality_gap <= 1e-9 && rep.best_search_excess <= 1e-9;
  return rep;
}

MonotoneUnionReport verify_monotone_union(Complex x, const std::vector<TorusArcs>& nested) {
  MonotoneUnionReport rep;
  if (nested.empty()) return rep;
  TorusArcs total;
  for (const auto& u : nested) total = total.unite(u);
  rep.limit_value = poisson(x, total);
  rep.monotone = true;
  double prev = 0.0;
  for (std::size_t j = 0; j < nested.size(); ++j) {
    double v = poisson(x, nested[j]);
    rep.values.push_back(v);
    if (j > 0 && v > prev + 1e-15) rep.monotone = false;
    prev = v;
  }
  rep.final_gap = std::abs(rep.values.back() - rep.limit_value);
  rep.pass = rep.monotone && rep.final_gap <= rep.tol;
  return rep;
}

WeakRegularityReport weak_regularity_probe(const SetExpr& U, int interior_rays,
                                           int radius_doublings) {
  TorusArcs arcs = to_torus_arcs(U);
  WeakRegularityReport rep;
  auto probe = [&](double angle, const char* cls) {
    RayProbe p;
    p.angle = angle;
    p.classification = cls;
    for (int k = 4; k <= radius_doublings; ++k) {
      double r = 1.0 - std::ldexp(1.0, -k);
      p.limit_estimate = poisson(r * unit(angle), arcs);
      p.trace.emplace_back(r, p.limit_estimate);
    }
    rep.rays.push_back(p);
    return p.limit_estimate;
  };
  double worst = 0.0;
  for (const auto& a : arcs.intervals()) {
    for (int i = 0; i < interior_rays; ++i) {
      double t = a.lo + a.len * (i + 1.0) / (interior_rays + 1.0);
      double v = probe(kTwoPi * t, "inside");
      worst = std::max(worst, std::abs(v + 1.0));
    }
    probe(kTwoPi * a.lo, "endpoint");
    probe(kTwoPi * a.hi(), "endpoint");
  }
  for (const auto& gap : arcs.complement().intervals()) {
    double t = gap.lo + gap.len / 2;
    probe(kTwoPi * t, "outside");
  }
  rep.worst_inside_gap = worst;
  rep.pass = worst <= 1e-3;
  return rep;
}

BoundaryClosureReport verify_boundary_closure(Complex x, const SetExpr& A) {
  BoundarySplit split = split_boundary_set(A);
  BoundaryClosureReport rep;
  rep.omega_closure = omega_boundary(split, x).value;
  BlaschkeDisc phi = mobius_through(x);
  // Finite fibers on the circle: the point part contributes no measure.
  rep.sigma_bound = -blaschke_sigma(phi, split.arcs);
  rep.omega_star = poisson(x, split.arcs);
  rep.pass = rep.omega_closure <= rep.sigma_bound + rep.tol &&
             rep.sigma_bound <= rep.omega_star + rep.tol;
  return rep;
}

PolarWitnessReport polar_boundary_witness(double point_angle, Complex center_probe, int terms) {
  PolarWitnessReport rep;
  rep.terms = terms;
  double t0 = point_angle / kTwoPi;
  Complex ray = (1.0 - std::ldexp(1.0, -30)) * unit(point_angle);
  CompensatedSum at_center, on_ray;
  for (int n = 1; n <= terms; ++n) {
    double half_width = std::max(std::ldexp(1.0, -n - 2), std::ldexp(1.0, -26));
    TorusArcs u = TorusArcs::from_intervals({{t0 - half_width, 2 * half_width}});
    at_center.add(poisson(center_probe, u));
    on_ray.add(poisson(ray, u));
  }
  rep.value_at_center = at_center.value();
  rep.value_on_ray = on_ray.value();
  rep.pass = rep.value_at_center > -1.0 && rep.value_on_ray < -1e3;
  return rep;
}

}  // namespace pluri
