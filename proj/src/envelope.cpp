#include "pluri/envelope.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pluri {

namespace {
constexpr double kSentinel = std::numeric_limits<double>::quiet_NaN();

// zeta ranges over the 8 unit offsets of the discrete circle.
constexpr std::array<std::array<int, 2>, 8> kZeta = {
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
}  // namespace

std::vector<Direction> default_directions(int dim) {
  if (dim == 1) return {Direction{{1, 0, 0, 0}}};
  return {Direction{{1, 0, 0, 0}}, Direction{{0, 0, 1, 0}}, Direction{{1, 0, 1, 0}},
          Direction{{1, 0, -1, 0}}};
}

GridSpec::GridSpec(const DomainSpec& domain, double h, const std::vector<Direction>& dirs,
                   std::size_t node_cap)
    : domain_(domain), dim_(domain.dim()), h_(h), dirs_(dirs) {
  if (!(h > 0)) throw ValidationError("grid resolution h must be positive");
  if (dirs_.empty()) dirs_ = default_directions(dim_);
  for (const auto& d : dirs_) {
    bool zero = d.d[0] == 0 && d.d[1] == 0 && d.d[2] == 0 && d.d[3] == 0;
    if (zero) throw ValidationError("direction must be nonzero");
    for (int c : d.d)
      if (c < -1 || c > 1) throw ValidationError("direction entries must be in {-1,0,1}");
    if (dim_ == 1 && (d.d[2] != 0 || d.d[3] != 0))
      throw ValidationError("direction dimension exceeds the domain dimension");
  }

  auto box = domain.bounding_box();
  int axes = 2 * dim_;
  std::size_t total = 1;
  for (int a = 0; a < axes; ++a) {
    // One guard cell per side keeps every interior node's stencil in range.
    long k_min = static_cast<long>(std::ceil((box[a].first - h / 2) / h)) - 1;
    long k_max = static_cast<long>(std::floor((box[a].second + h / 2) / h)) + 1;
    if (k_max < k_min) throw ValidationError("degenerate grid axis");
    origin_[a] = static_cast<double>(k_min) * h;
    n_[a] = static_cast<int>(k_max - k_min + 1);
    total *= static_cast<std::size_t>(n_[a]);
  }
  if (total > node_cap) throw ValidationError("grid node count exceeds the configured cap");

  // Per-direction stencil offsets in flattened index space.
  for (const auto& d : dirs_) {
    std::array<long, 8> offs{};
    for (int k = 0; k < 8; ++k) {
      // zeta*d per complex coordinate: (a+bi)(c+di) = (ac-bd) + (ad+bc)i
      int zr = kZeta[k][0], zi = kZeta[k][1];
      std::array<int, 4> o{};
      o[0] = zr * d.d[0] - zi * d.d[1];
      o[1] = zr * d.d[1] + zi * d.d[0];
      o[2] = zr * d.d[2] - zi * d.d[3];
      o[3] = zr * d.d[3] + zi * d.d[2];
      long delta = ((static_cast<long>(o[3]) * n_[2] + o[2]) * n_[1] + o[1]) * n_[0] + o[0];
      offs[k] = delta;
    }
    dir_offsets_.push_back(offs);
  }
  for (const auto& offs : dir_offsets_)
    for (long o : offs)
      if (std::find(neighborhood_.begin(), neighborhood_.end(), o) == neighborhood_.end())
        neighborhood_.push_back(o);

  // Classification: interior = strictly inside the domain; boundary = outside
  // but stencil-adjacent to an interior node; the rest is exterior. Stencil
  // reads from interior nodes therefore never leave {interior, boundary}.
  cls_.assign(total, NodeClass::Exterior);
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (domain.contains(point(flat))) {
      cls_[flat] = NodeClass::Interior;
      ++interior_count_;
    }
  }
  // Interior nodes sit at least one cell inside the bounding box (box edges
  // are not strictly inside the domain), so offset reads stay in range.
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (cls_[flat] != NodeClass::Interior) continue;
    for (long o : neighborhood_) {
      std::size_t nb = flat + static_cast<std::size_t>(o);
      if (cls_[nb] == NodeClass::Exterior) cls_[nb] = NodeClass::Boundary;
    }
  }
}

std::array<double, 4> GridSpec::coords(std::size_t idx) const {
  std::array<double, 4> c{};
  std::size_t rem = idx;
  for (int a = 0; a < 4; ++a) {
    std::size_t i = rem % static_cast<std::size_t>(n_[a]);
    rem /= static_cast<std::size_t>(n_[a]);
    c[a] = origin_[a] + static_cast<double>(i) * h_;
  }
  return c;
}

ComplexPoint GridSpec::point(std::size_t idx) const {
  auto c = coords(idx);
  return dim_ == 1 ? ComplexPoint(Complex(c[0], c[1]))
                   : ComplexPoint(Complex(c[0], c[1]), Complex(c[2], c[3]));
}

GridPtr make_grid(const DomainSpec& domain, const SolverParams& params) {
  return std::make_shared<GridSpec>(domain, params.h,
                                    params.directions.empty()
                                        ? default_directions(domain.dim())
                                        : params.directions,
                                    params.node_cap);
}

GridField build_obstacle(const DomainSpec& domain, const SetExpr& A, const GridPtr& grid) {
  if (A.dim() != domain.dim())
    throw DimensionError("set dimension does not match domain dimension");
  GridField f{grid, std::vector<double>(grid->count(), kSentinel)};
  const double margin = grid->h() / 2;
  for (std::size_t i = 0; i < grid->count(); ++i) {
    switch (grid->cls(i)) {
      case NodeClass::Interior:
        f.v[i] = member_margin(A, grid->point(i), margin) ? -1.0 : 0.0;
        break;
      case NodeClass::Boundary:
        f.v[i] = 0.0;
        break;
      default:
        break;
    }
  }
  return f;
}

namespace {

EnvelopeResult relax_envelope(const GridField& g, const GridSpec& grid,
                              const std::vector<std::array<long, 8>>& offs, double tol,
                              long max_iter) {
  EnvelopeResult res;
  res.method = "relax";
  res.field.grid = g.grid;
  std::vector<double>& v = res.field.v;
  v.assign(grid.count(), kSentinel);

  std::vector<std::size_t> active;  // interior, obstacle 0
  std::vector<std::size_t> pinned;  // interior, obstacle -1
  for (std::size_t i = 0; i < grid.count(); ++i) {
    if (grid.cls(i) == NodeClass::Interior) {
      v[i] = 0.0;
      (g.v[i] < 0.0 ? pinned : active).push_back(i);
    } else if (grid.cls(i) == NodeClass::Boundary) {
      v[i] = 0.0;
    }
  }

  const std::size_t ndirs = offs.size();
  long iter = 0;
  double change = 0.0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    change = 0.0;
    if (iter == 0) {
      // First sweep: min(g, avg of zeros) pins the obstacle nodes.
      for (std::size_t i : pinned) v[i] = -1.0;
      change = pinned.empty() ? 0.0 : 1.0;
    }
    // Gauss-Seidel sweep with alternating orientation; updates only decrease.
    auto update = [&](std::size_t i) {
      double best = 0.0;
      for (std::size_t d = 0; d < ndirs; ++d) {
        const auto& o = offs[d];
        double s = v[i + o[0]] + v[i + o[1]] + v[i + o[2]] + v[i + o[3]] + v[i + o[4]] +
                   v[i + o[5]] + v[i + o[6]] + v[i + o[7]];
        double avg = 0.125 * s;
        if (avg < best) best = avg;
      }
      double delta = v[i] - best;
      if (delta > 0.0) {
        v[i] = best;
        if (delta > change) change = delta;
      }
    };
    if (iter % 2 == 0) {
      for (auto it = active.begin(); it != active.end(); ++it) update(*it);
    } else {
      for (auto it = active.rbegin(); it != active.rend(); ++it) update(*it);
    }
    if (tol > 0.0 && change < tol) {
      ++iter;
      converged = true;
      break;
    }
  }
  res.converged = converged;
  res.iterations = iter;
  res.final_change = change;
  return res;
}

EnvelopeResult direct_envelope(const GridField& g, const GridSpec& grid,
                               const std::vector<std::array<long, 8>>& offs) {
  if (grid.dim() != 1 || offs.size() != 1)
    throw NotSupportedError("direct mode requires dim 1 with the single default direction");
  EnvelopeResult res;
  res.method = "direct";
  res.field.grid = g.grid;
  std::vector<double>& v = res.field.v;
  v.assign(grid.count(), kSentinel);

  std::vector<std::int64_t> eq(grid.count(), -1);
  std::vector<std::size_t> unknowns;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    if (grid.cls(i) == NodeClass::Boundary) v[i] = 0.0;
    if (grid.cls(i) != NodeClass::Interior) continue;
    if (g.v[i] < 0.0) {
      v[i] = -1.0;
    } else {
      eq[i] = static_cast<std::int64_t>(unknowns.size());
      unknowns.push_back(i);
    }
  }
  if (unknowns.empty()) {
    res.converged = true;
    res.iterations = 1;
    return res;
  }

  const auto& o = offs[0];
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(unknowns.size() * 9);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    std::size_t i = unknowns[k];
    trips.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
    for (int s = 0; s < 8; ++s) {
      std::size_t nb = i + static_cast<std::size_t>(o[s]);
      if (eq[nb] >= 0) {
        trips.emplace_back(static_cast<int>(k), static_cast<int>(eq[nb]), -0.125);
      } else {
        b[static_cast<Eigen::Index>(k)] += 0.125 * v[nb];  // known: -1 or 0
      }
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(unknowns.size()),
                                static_cast<Eigen::Index>(unknowns.size()));
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  Eigen::VectorXd x;
  if (solver.info() == Eigen::Success) {
    x = solver.solve(b);
  }
  if (solver.info() != Eigen::Success) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.compute(A);
    x = cg.solve(b);
  }
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    double val = x[static_cast<Eigen::Index>(k)];
    v[unknowns[k]] = std::min(0.0, std::max(-1.0, val));
  }
  res.converged = true;
  res.iterations = 1;
  return res;
}

}  // namespace

EnvelopeResult psh_envelope(const GridField& obstacle, const std::vector<Direction>& dirs,
                            double tol, long max_iter, SolverMode mode) {
  if (!obstacle.grid) throw ValidationError("obstacle field has no grid");
  const GridSpec& grid = *obstacle.grid;
  if (tol < 0.0) throw ValidationError("tol must be >= 0");
  for (std::size_t i = 0; i < grid.count(); ++i) {
    if (grid.cls(i) == NodeClass::Interior) {
      double g = obstacle.v[i];
      if (g != 0.0 && g != -1.0)
        throw ValidationError("obstacle values must be in {-1, 0} on interior nodes");
    }
  }
  std::vector<Direction> use = dirs.empty() ? grid.directions() : dirs;
  if (!(use == grid.directions()))
    throw ValidationError("direction list must match the grid's stencil");
  if (mode == SolverMode::Direct) return direct_envelope(obstacle, grid, grid.direction_offsets());
  return relax_envelope(obstacle, grid, grid.direction_offsets(), tol, max_iter);
}

GridField usc_regularize(const GridField& field) {
  const GridSpec& grid = *field.grid;
  GridField out{field.grid, field.v};
  for (std::size_t i = 0; i < grid.count(); ++i) {
    if (grid.cls(i) != NodeClass::Interior) continue;
    double m = field.v[i];
    for (long o : grid.neighborhood()) {
      std::size_t nb = i + static_cast<std::size_t>(o);
      if (grid.cls(nb) != NodeClass::Exterior) m = std::max(m, field.v[nb]);
    }
    out.v[i] = m;
  }
  return out;
}

double interpolate(const GridField& field, const ComplexPoint& x) {
  const GridSpec& grid = *field.grid;
  if (x.dim() != grid.dim()) throw DimensionError("probe dimension does not match grid");
  int axes = 2 * grid.dim();
  std::array<double, 4> q{x.z1().real(), x.z1().imag(), x.z2().real(), x.z2().imag()};
  std::array<int, 4> i0{0, 0, 0, 0};
  std::array<double, 4> w{0, 0, 0, 0};
  auto sizes = grid.sizes();
  auto origin = grid.origin();
  for (int a = 0; a < axes; ++a) {
    double t = (q[a] - origin[a]) / grid.h();
    double fl = std::floor(t);
    i0[a] = static_cast<int>(fl);
    w[a] = t - fl;
    if (i0[a] < 0 || i0[a] + 1 >= sizes[a])
      throw ValidationError("probe point lies outside the grid");
  }
  double acc = 0.0;
  int corners = 1 << axes;
  for (int c = 0; c < corners; ++c) {
    std::array<int, 4> ic = i0;
    double wc = 1.0;
    for (int a = 0; a < axes; ++a) {
      if (c & (1 << a)) {
        ic[a] += 1;
        wc *= w[a];
      } else {
        wc *= 1.0 - w[a];
      }
    }
    std::size_t idx = grid.index(ic);
    double val = grid.cls(idx) == NodeClass::Exterior ? 0.0 : field.v[idx];
    acc += wc * val;
  }
  return std::min(0.0, std::max(-1.0, acc));
}

OmegaResult omega_at(const DomainSpec& domain, const SetExpr& A, const ComplexPoint& x,
                     const SolverParams& params) {
  if (!domain.contains(x)) throw ValidationError("probe point must be interior to the domain");
  GridPtr grid = make_grid(domain, params);
  GridField obstacle = build_obstacle(domain, A, grid);
  EnvelopeResult env = psh_envelope(obstacle, grid->directions(), params.tol, params.max_iter,
                                    params.mode);
  OmegaResult out;
  out.value = interpolate(env.field, x);
  out.converged = env.converged;
  out.iterations = env.iterations;
  return out;
}

}  // namespace pluri
