#pragma once

#include <string>
#include <vector>

#include "pluri/discs.hpp"
#include "pluri/envelope.hpp"
#include "pluri/geometry.hpp"

namespace pluri {

// Normalized Lebesgue over the domain, realized as the uniform probability
// weights on interior cell centers (single chart).
struct ChartMeasure {
  GridPtr grid;
  double node_weight = 0.0;
  std::size_t interior_count = 0;

  static ChartMeasure over(const GridPtr& grid);
  double total() const;  // = 1 up to round-off
};

struct CapacityReport {
  double value = 0.0;  // c_mu(A) = -integral of omega* d mu
  double grid_h = 0.0;
  std::size_t nodes = 0;
  bool envelope_converged = true;
  long iterations = 0;
  std::string method;
  bool regularized = true;  // one usc pass applied before integrating
};

CapacityReport capacity(const DomainSpec& domain, const SetExpr& A, const SolverParams& params);

struct AxiomEntry {
  std::string id;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  std::string detail;
};

struct AxiomLedger {
  std::vector<AxiomEntry> entries;
  bool all_passed() const;
};

// Lemma-style Choquet checks on nested families:
//  (1) exact monotonicity of c over nested sets on a shared grid and sweep
//      budget, (2) decreasing compacts within 2% once the radius gap drops
//      under h, (3) the same bound for increasing unions.
struct AxiomSuiteParams {
  double mono_h = 1.0 / 64;
  long mono_budget = 3000;
  double limit_h = 1.0 / 128;
  double limit_rel_tol = 0.02;
  std::size_t node_cap = std::size_t(1) << 28;
};

AxiomLedger axiom_suite(const AxiomSuiteParams& params = {});

struct PolarReport {
  bool finite_sigma_zero = false;      // exact-mode sigma_f(E) = 0 over the batch
  int discs_checked = 0;
  std::vector<double> capacities;      // c(ClosedDisc(0, 2^-j)) for the j range
  std::vector<double> ratio_errors;    // |ratio/(j/(j+1)) - 1|
  bool ratios_pass = false;
  std::vector<double> exhaustion_sigma;  // best sigma over growing domains
  bool exhaustion_monotone = false;
  bool all_passed() const;
};

struct PolarTestParams {
  int disc_batch = 100;
  int disc_degree = 8;
  std::uint64_t seed = 20260811ull;
  int j_min = 2;
  int j_max = 8;
  double capacity_h = 1.0 / 512;
  double ratio_tol = 0.10;
  std::vector<double> domain_radii = {1.0, 2.0, 4.0};
  DiscOptParams exhaustion_opt;
};

// Pluripolar-set evidence: finite sets are missed by every disc boundary
// (exact sigma arithmetic), capacities of shrinking discs decay like 1/j, and
// the attainable sigma grows with the domain exhaustion.
PolarReport polar_disc_test(const PolarTestParams& params = {});

}  // namespace pluri
