#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pluri/geometry.hpp"
#include "pluri/rng.hpp"

namespace pluri {

// u_{-chi_U, D}(z) on the unit disc: minus the harmonic measure of the arc
// union U at z, by the per-arc antiderivative of the Poisson kernel.
double poisson(Complex z, const TorusArcs& U);
double poisson(Complex z, const SetExpr& U);

struct OmegaBoundaryResult {
  double value = 0.0;
  double last_gap = 0.0;  // |last - previous| of the enlargement sequence
  int steps = 0;
};

// Relative extremal function of a compact boundary set: supremum over open
// neighborhoods, realized by geometric eps-enlargements down to 2^-40.
OmegaBoundaryResult omega_boundary(const SetExpr& A, Complex z);
OmegaBoundaryResult omega_boundary(const BoundarySplit& A, Complex z);

// Finite Blaschke product b(z) = e^{i phase} prod (z - a_j)/(1 - conj(a_j) z).
struct BlaschkeDisc {
  double phase = 0.0;
  std::vector<Complex> zeros;

  Complex eval(Complex z) const;
  Complex at_zero() const;  // e^{i phase} * prod(-a_j)
  int degree() const { return static_cast<int>(zeros.size()); }
  void validate() const;  // |a_j| < 1 and unimodularity at samples
};

// Disc automorphism with phi(0) = x, as a degree-1 Blaschke product.
BlaschkeDisc mobius_through(Complex x);

// Exact preimage measure sigma({theta : B(e^{i theta}) in A}) for an arc
// union A, via monotone boundary-argument tracking.
double blaschke_sigma(const BlaschkeDisc& B, const TorusArcs& A);
double blaschke_sigma(const BlaschkeDisc& B, const SetExpr& A);

struct BoundaryEqualityReport {
  Complex x;
  double poisson_value = 0.0;
  double mobius_sigma = 0.0;
  double equality_gap = 0.0;  // |poisson + sigma_phi|
  double best_search_excess = 0.0;  // max over searched discs of sigma_B - sigma_phi
  int searched = 0;
  bool pass = false;
};

// Checks the boundary equality at x: the automorphism through x attains
// sigma = -poisson to 1e-9, and no searched Blaschke disc beats it.
BoundaryEqualityReport verify_boundary_equality(Complex x, const SetExpr& U, int degree_cap, std::uint64_t seed = 1,
                       int search_count = 40);

struct MonotoneUnionReport {
  std::vector<double> values;
  double limit_value = 0.0;
  double final_gap = 0.0;
  bool monotone = false;
  bool pass = false;  // monotone and |values.back() - limit| <= tol
  double tol = 1e-6;
};

MonotoneUnionReport verify_monotone_union(Complex x, const std::vector<TorusArcs>& nested);

struct RayProbe {
  double angle = 0.0;
  double limit_estimate = 0.0;  // value at the last radius
  std::string classification;   // "inside", "outside", "endpoint"
  std::vector<std::pair<double, double>> trace;  // (radius, value)
};

struct WeakRegularityReport {
  std::vector<RayProbe> rays;
  double worst_inside_gap = 0.0;  // max over rays into U of |limit + 1|
  bool pass = false;
};

// Radial-limit check of u*_{-chi_U} <= -chi_U: rays into U approach -1, rays
// off the closure approach 0, endpoints land near the jump value -1/2.
WeakRegularityReport weak_regularity_probe(const SetExpr& U, int interior_rays,
                                           int radius_doublings = 20);

struct BoundaryClosureReport {
  double omega_closure = 0.0;   // omega(x, closure A, D)
  double sigma_bound = 0.0;     // -sigma_phi(closure A)
  double omega_star = 0.0;      // omega*(x, A, D), finite part ignored
  double tol = 1e-6;
  bool pass = false;
};

// A = A1 (arc union) plus a finite unit-circle point set E.
BoundaryClosureReport verify_boundary_closure(Complex x, const SetExpr& A);

struct PolarWitnessReport {
  double value_at_center = 0.0;  // sum at the probe point, stays above -1
  double value_on_ray = 0.0;     // sum near the polar set, below -1000
  int terms = 0;
  bool pass = false;
};

// Builds u = sum_n omega(., U_n, D) for shrinking arc neighborhoods U_n of a
// boundary point and evaluates it at the center and along the inward ray.
PolarWitnessReport polar_boundary_witness(double point_angle, Complex center_probe,
                                          int terms = 1500);

}  // namespace pluri
