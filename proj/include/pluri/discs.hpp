#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pluri/envelope.hpp"
#include "pluri/geometry.hpp"
#include "pluri/rng.hpp"

namespace pluri {

// Polynomial disc f: closure(D) -> C^n, one coefficient list per coordinate,
// constant terms pinned to the designated center.
struct AnalyticDisc {
  int dim = 1;
  std::vector<std::vector<Complex>> coeff;  // coeff[i][k] multiplies z^k

  ComplexPoint center() const;
  int degree() const;
};

AnalyticDisc constant_disc(const ComplexPoint& x);

ComplexPoint eval_disc(const AnalyticDisc& f, Complex z);

struct Feasibility {
  bool feasible = false;
  double margin = 0.0;  // 1 - max sampled gauge
};

// Boundary-sample feasibility certificate: the domain gauge of a holomorphic
// map attains its maximum on the circle, so M uniform samples bound the gauge
// up to the Bernstein factor handled by the optimizer internally.
Feasibility feasible(const AnalyticDisc& f, const DomainSpec& X, int M);

// sigma(f^{-1}(A) on the circle). Midpoint sampling at M angles; in exact
// mode (dim 1) membership transitions are located by bisection to 1e-12 rad.
double sigma_f(const AnalyticDisc& f, const SetExpr& A, int M, bool exact_mode);

bool sigma_exact_supported(const AnalyticDisc& f, const SetExpr& A);

struct DiscOptParams {
  int degree = 12;
  int restarts = 20;
  long budget = 2000;  // objective evaluations per restart
  int samples = 4096;  // final sigma evaluation
  int loop_samples = 1024;
  bool exact_sigma = true;
  std::uint64_t seed = 20260811ull;
  double shrink_margin = 1e-6;
  int threads = 0;  // 0 = hardware
  std::vector<AnalyticDisc> warm_starts;
};

struct RestartEntry {
  int restart = 0;
  std::string kind;  // "constant", "structured", "random", "warm"
  double sigma = 0.0;
  long evals = 0;
};

struct DiscOptResult {
  AnalyticDisc best;
  double sigma = 0.0;
  double omega_upper = 0.0;  // = -sigma, a certified upper bound
  double margin = 0.0;
  std::vector<RestartEntry> restart_log;
  std::uint64_t seed = 0;
  int samples = 0;
  long total_evals = 0;
};

// Maximize sigma_f(A) over feasible polynomial discs with f(0) = x. The
// constant disc is always a candidate, so the result never falls below that
// baseline and is always feasible.
DiscOptResult optimize_discs(const DomainSpec& X, const SetExpr& A, const ComplexPoint& x,
                             const DiscOptParams& params);

// ---------------------------------------------------------------------------
// Two-variable maps and the gluing construction

struct BivariateDisc {
  int dim = 1;
  // coeff[i][p][q] multiplies z^p w^q for coordinate i.
  std::vector<std::vector<std::vector<Complex>>> coeff;

  int z_degree() const;
  int w_degree() const;
  ComplexPoint eval(Complex z, Complex w) const;
  // The z-constant slice F(0, w) as a univariate disc.
  AnalyticDisc slice_at_zero() const;
};

// g(w) = F(e^{i*theta} w^{k+1}, w); g(0) = F(0,0) exactly.
AnalyticDisc radial_twist(const BivariateDisc& F, int k, double theta);

struct ThetaChoice {
  double theta = 0.0;
  double sigma = 0.0;      // sigma(C'(theta*))
  double grid_mean = 0.0;  // mean of sigma(C'(theta)) over the grid
  double slack = 0.0;      // max(0, sigma_2(C) - sigma)
};

// Scan T grid angles; sigma(C'(theta)) is computed exactly with arc
// arithmetic. Returns the maximizing angle.
ThetaChoice choose_theta(const TorusSet& C, int k, int T);

// sigma of one slice {w in J : e^{i theta} w^{k+1} in I} summed over rects.
double twist_slice_measure(const TorusSet& C, int k, double theta);

// Trigonometric smoothing profile with values clamped to [0,1].
class SmoothingProfile {
 public:
  SmoothingProfile() = default;
  explicit SmoothingProfile(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}
  double eval_turns(double t) const;
  double eval_angle(double theta) const { return eval_turns(theta / kTwoPi); }
  const std::vector<Complex>& coeffs() const { return c_; }
  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }

 private:
  std::vector<Complex> c_;  // c_[k] multiplies e^{ik theta}, k >= 0; value = Re c0 + 2 Re sum
};

struct SmoothingBuild {
  SmoothingProfile profile;
  std::vector<TorusInterval> plateaus;  // sub-arcs where the profile is ~1
  double plateau_min = 0.0;             // smallest sampled value on the plateaus
  double off_max = 0.0;                 // largest sampled value off the arcs
};

SmoothingBuild make_smoothing_profile(const std::vector<TorusInterval>& arcs,
                                      double plateau_fraction, int degree);

struct GluePatch {
  TorusInterval arc;  // in turns
  BivariateDisc local;
};

struct GluingSpec {
  AnalyticDisc base;  // h
  std::vector<GluePatch> patches;
  SmoothingProfile rho;
  std::vector<TorusInterval> plateaus;
  int truncation_degree = 64;
  double pin_tol = 1e-9;       // |F_j(0,.) - h| allowed on the arcs
  double residual_tol = 0.05;  // relative to the coefficient scale

  void validate() const;
};

struct GlueResult {
  BivariateDisc glued;
  int base_twist = 0;  // the stored map is the target composed with z -> z w^{base_twist}
  double residual = 0.0;
  double scale = 0.0;  // sup of the target's z>=1 coefficient profiles
  bool flagged = false;
};

// Build the circle map (patches blended by rho, base elsewhere), fit each
// z-coefficient's w-dependence by a trigonometric polynomial of the given
// degree, absorb negative powers with the recorded base twist, and pin the
// z-constant slice to the base disc exactly.
GlueResult glue(const GluingSpec& spec, int truncation_degree);

// ---------------------------------------------------------------------------

struct DiscBoundReport {
  double omega_est = 0.0;
  double omega_upper = 0.0;
  double sigma_best = 0.0;
  double tol = 0.0;
  bool pass_upper = false;              // omega_upper <= omega_est + tol
  std::optional<bool> pass_equality;    // |omega_upper - omega_est| <= tol (open sets)
  bool pass_lower = false;              // omega_upper >= omega_est - tol_lower
  double tol_lower = 0.0;
};

DiscBoundReport verify_disc_bound(const DomainSpec& X, const SetExpr& A, const ComplexPoint& x, double tol,
                       const SolverParams& solver, const DiscOptParams& opt,
                       bool check_equality = false, double tol_lower = 0.03);

// Same check against a precomputed envelope field (shared across probes).
DiscBoundReport verify_disc_bound_with_field(const GridField& envelope_field, const DomainSpec& X,
                                  const SetExpr& A, const ComplexPoint& x, double tol,
                                  const DiscOptParams& opt, bool check_equality = false,
                                  double tol_lower = 0.03);

}  // namespace pluri
