#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pluri/geometry.hpp"

namespace pluri {

enum class NodeClass : std::uint8_t { Exterior = 0, Boundary = 1, Interior = 2 };

// A complex line direction d in C^n with entries in {-1,0,1}+i{-1,0,1}; the
// discrete circle in that line is the 8 grid points z + zeta*d*h for
// zeta in {+-1, +-i, +-1+-i}.
struct Direction {
  std::array<int, 4> d;  // (Re d1, Im d1, Re d2, Im d2)
  bool operator==(const Direction& o) const { return d == o.d; }
};

std::vector<Direction> default_directions(int dim);

enum class SolverMode { Relax, Direct };

struct SolverParams {
  double h = 1.0 / 256;
  double tol = 1e-8;
  long max_iter = 200000;
  SolverMode mode = SolverMode::Relax;
  std::vector<Direction> directions;  // empty = defaults for the dimension
  std::size_t node_cap = std::size_t(1) << 28;
};

// Cell-centered grid over the domain's bounding box, nodes on the lattice
// h*Z^{2n} so grids of nested domains share node coordinates.
class GridSpec {
 public:
  GridSpec(const DomainSpec& domain, double h, const std::vector<Direction>& dirs,
           std::size_t node_cap);

  int dim() const { return dim_; }
  double h() const { return h_; }
  const DomainSpec& domain() const { return domain_; }
  const std::vector<Direction>& directions() const { return dirs_; }

  std::size_t count() const { return cls_.size(); }
  NodeClass cls(std::size_t idx) const { return cls_[idx]; }
  const std::vector<NodeClass>& classes() const { return cls_; }

  std::array<int, 4> sizes() const { return n_; }
  std::array<double, 4> origin() const { return origin_; }

  std::size_t index(const std::array<int, 4>& i) const {
    return ((static_cast<std::size_t>(i[3]) * n_[2] + i[2]) * n_[1] + i[1]) * n_[0] + i[0];
  }
  std::array<double, 4> coords(std::size_t idx) const;
  ComplexPoint point(std::size_t idx) const;

  // Flattened index deltas of the 8-point circle stencil of one direction.
  const std::vector<std::array<long, 8>>& direction_offsets() const { return dir_offsets_; }
  // Union of all direction stencils (used for classification and usc pass).
  const std::vector<long>& neighborhood() const { return neighborhood_; }

  std::size_t interior_count() const { return interior_count_; }

 private:
  DomainSpec domain_;
  int dim_;
  double h_;
  std::array<double, 4> origin_{};
  std::array<int, 4> n_{1, 1, 1, 1};
  std::vector<Direction> dirs_;
  std::vector<std::array<long, 8>> dir_offsets_;
  std::vector<long> neighborhood_;
  std::vector<NodeClass> cls_;
  std::size_t interior_count_ = 0;
};

using GridPtr = std::shared_ptr<const GridSpec>;

struct GridField {
  GridPtr grid;
  std::vector<double> v;
};

GridPtr make_grid(const DomainSpec& domain, const SolverParams& params);

// Rasterize the obstacle -chi_A: a node is -1 iff its cell center lies in A,
// with closed sets additionally capturing centers within h/2.
GridField build_obstacle(const DomainSpec& domain, const SetExpr& A, const GridPtr& grid);

struct EnvelopeResult {
  GridField field;
  bool converged = false;
  long iterations = 0;
  double final_change = 0.0;
  std::string method;  // "relax" or "direct"
};

// Largest grid function v <= obstacle with v <= (circle average of v) along
// every configured direction; boundary nodes are clamped to 0.
//
// Relax mode runs the monotone sweep v <- min(g, min_d avg_d v) from v0 = 0
// (pointwise non-increasing, order preserving) until the sup-change drops
// below tol or max_iter sweeps elapse. tol = 0 forces exactly max_iter sweeps.
// Direct mode (dim 1, default direction only) solves the equivalent
// harmonic-infill system; it produces the same fixed point.
EnvelopeResult psh_envelope(const GridField& obstacle, const std::vector<Direction>& dirs,
                            double tol, long max_iter, SolverMode mode = SolverMode::Relax);

// One neighborhood-max pass; grid proxy for the upper semicontinuous
// regularization. Output >= input pointwise.
GridField usc_regularize(const GridField& field);

// Multilinear interpolation at an interior point; exterior corners read as 0.
double interpolate(const GridField& field, const ComplexPoint& x);

// Convenience: obstacle + envelope + interpolation in one call.
struct OmegaResult {
  double value = 0.0;
  bool converged = true;
  long iterations = 0;
};
OmegaResult omega_at(const DomainSpec& domain, const SetExpr& A, const ComplexPoint& x,
                     const SolverParams& params);

}  // namespace pluri
