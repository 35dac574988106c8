#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pluri/errors.hpp"
#include "pluri/numeric.hpp"

namespace pluri {

using Complex = std::complex<double>;

// Point of C^n, n in {1,2}.
class ComplexPoint {
 public:
  explicit ComplexPoint(Complex z1);
  ComplexPoint(Complex z1, Complex z2);

  int dim() const { return dim_; }
  Complex z1() const { return c_[0]; }
  Complex z2() const { return c_[1]; }
  Complex coord(int i) const { return c_[i]; }

  bool operator==(const ComplexPoint& o) const {
    return dim_ == o.dim_ && c_[0] == o.c_[0] && c_[1] == o.c_[1];
  }

 private:
  std::array<Complex, 2> c_;
  int dim_;
};

// ---------------------------------------------------------------------------
// Domains

struct UnitDisc {};
struct Disc {
  Complex center;
  double radius;
};
struct Annulus {
  double r_in, r_out;
};
struct Polydisc {
  double r1, r2;
};
struct UnitBall {
  int n;
};

class DomainSpec {
 public:
  using Variant = std::variant<UnitDisc, Disc, Annulus, Polydisc, UnitBall>;

  DomainSpec() : v_(UnitDisc{}) {}
  explicit DomainSpec(Variant v);

  int dim() const;
  const Variant& variant() const { return v_; }

  // Strict interior membership.
  bool contains(const ComplexPoint& p) const;
  // Scale-invariant gauge: < 1 inside, = 1 on the boundary. For the annulus
  // this covers both boundary components.
  double gauge(const ComplexPoint& p) const;
  // Per-real-axis bounding interval [lo, hi], 2*dim axes.
  std::array<std::pair<double, double>, 4> bounding_box() const;

  std::string describe() const;

 private:
  Variant v_;
};

// ---------------------------------------------------------------------------
// Arcs on the unit circle, kept in normalized "turn" units.
//
// Intervals are stored as (lo, len) with the length primary, so that measures
// of constructions such as Cantor iterates follow the construction recurrence
// bit for bit instead of accumulating endpoint round-off.

struct TorusInterval {
  double lo;   // in [0, 1)
  double len;  // > 0
  double hi() const { return lo + len; }
};

class TorusArcs {
 public:
  TorusArcs() = default;
  static TorusArcs full_circle();
  static TorusArcs from_radians(double theta1, double theta2);
  static TorusArcs from_intervals(std::vector<TorusInterval> iv);

  const std::vector<TorusInterval>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }

  double measure() const;

  TorusArcs unite(const TorusArcs& o) const;
  TorusArcs intersect(const TorusArcs& o) const;
  TorusArcs complement() const;
  // Widen every arc by eps turns on both ends.
  TorusArcs enlarge(double eps) const;
  // Rotate by delta turns.
  TorusArcs rotate(double delta) const;
  // Preimage under t -> m*t + shift (mod 1), m >= 1: each arc lifts to m
  // copies of length len/m.
  TorusArcs preimage_multiply(int m, double shift) const;

  bool contains(double t) const;  // t in turns, arcs closed

 private:
  std::vector<TorusInterval> iv_;
};

// ---------------------------------------------------------------------------
// Symbolic Borel sets

class SetExpr;

struct ClosedDiscSet {
  Complex center;
  double radius;
};
struct OpenDiscSet {
  Complex center;
  double radius;
};
struct BoxSet {
  Complex lo, hi;
};
struct ArcSet {
  double theta1, theta2;  // 0 <= theta1 < theta2 <= 2*pi
};
struct CantorSet {
  int level;
  double ratio;
  std::vector<TorusInterval> arcs;  // built eagerly, 2^level closed arcs
};
struct FinitePointsSet {
  std::vector<ComplexPoint> points;
  int dim;
};
struct ProductSet {
  std::shared_ptr<const SetExpr> a, b;
};
struct UnionSet {
  std::shared_ptr<const SetExpr> a, b;
};
struct IntersectionSet {
  std::shared_ptr<const SetExpr> a, b;
};
struct ComplementSet {
  std::shared_ptr<const SetExpr> a;
};

class SetExpr {
 public:
  using Variant = std::variant<ClosedDiscSet, OpenDiscSet, BoxSet, ArcSet, CantorSet,
                               FinitePointsSet, ProductSet, UnionSet, IntersectionSet,
                               ComplementSet>;

  explicit SetExpr(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }

 private:
  Variant v_;
  int dim_;
};

using SetPtr = std::shared_ptr<const SetExpr>;

namespace sets {
SetPtr closed_disc(Complex center, double radius);
SetPtr open_disc(Complex center, double radius);
SetPtr box(Complex lo, Complex hi);
SetPtr arc(double theta1, double theta2);
SetPtr cantor(int level, double ratio);
SetPtr points(std::vector<ComplexPoint> pts);
SetPtr empty(int dim);
SetPtr product(SetPtr a, SetPtr b);
SetPtr set_union(SetPtr a, SetPtr b);
SetPtr set_intersection(SetPtr a, SetPtr b);
SetPtr complement(SetPtr a);
}  // namespace sets

// Exact tree-semantics membership. Throws DimensionError on mismatch.
bool member(const SetExpr& set, const ComplexPoint& p);

// Membership with a signed metric margin: positive margin dilates closed
// primitives (open primitives are left strict), negative margin erodes them;
// complements flip the sign. Used by grid rasterization with margin = h/2.
bool member_margin(const SetExpr& set, const ComplexPoint& p, double margin);

// Exact normalized arc-length measure of a boolean combination of
// Arc/Cantor primitives. Throws ValidationError on non-boundary primitives.
double arc_measure(const SetExpr& set);

// Extract the set as normalized arcs (same preconditions as arc_measure).
TorusArcs to_torus_arcs(const SetExpr& set);

// Accepts arcs plus finitely many unit-circle points mixed by unions; returns
// the arc part and the angles (in turns) of the finite part.
struct BoundarySplit {
  TorusArcs arcs;
  std::vector<double> point_angles;
};
BoundarySplit split_boundary_set(const SetExpr& set);

// ---------------------------------------------------------------------------
// Finite unions of torus rectangles I_j x J_j with exact product measure.

class TorusSet {
 public:
  struct Rect {
    TorusInterval i, j;
  };

  TorusSet() = default;
  explicit TorusSet(std::vector<Rect> rects);  // validates pairwise disjointness

  const std::vector<Rect>& rects() const { return rects_; }
  TorusSet swapped() const;  // (z,w) -> (w,z)

  double measure() const;  // sigma_2

 private:
  std::vector<Rect> rects_;
};

}  // namespace pluri
