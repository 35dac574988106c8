#include "pluri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pluri {

namespace {

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ValidationError(std::string(what) + " must be finite");
}

double wrap_turn(double t) {
  t = t - std::floor(t);
  if (t >= 1.0) t = 0.0;
  return t;
}

}  // namespace

ComplexPoint::ComplexPoint(Complex z1) : c_{z1, Complex(0, 0)}, dim_(1) {
  require_finite(z1, "point coordinate");
}

ComplexPoint::ComplexPoint(Complex z1, Complex z2) : c_{z1, z2}, dim_(2) {
  require_finite(z1, "point coordinate");
  require_finite(z2, "point coordinate");
}

// ---------------------------------------------------------------------------
// DomainSpec

DomainSpec::DomainSpec(Variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Disc>) {
          if (!(d.radius > 0)) throw ValidationError("disc radius must be positive");
          require_finite(d.center, "disc center");
        } else if constexpr (std::is_same_v<T, Annulus>) {
          if (!(d.r_in > 0) || !(d.r_out > d.r_in))
            throw ValidationError("annulus requires 0 < r_in < r_out");
        } else if constexpr (std::is_same_v<T, Polydisc>) {
          if (!(d.r1 > 0) || !(d.r2 > 0)) throw ValidationError("polydisc radii must be positive");
        } else if constexpr (std::is_same_v<T, UnitBall>) {
          if (d.n != 1 && d.n != 2) throw ValidationError("unit ball dimension must be 1 or 2");
        }
      },
      v_);
}

int DomainSpec::dim() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Polydisc>)
          return 2;
        else if constexpr (std::is_same_v<T, UnitBall>)
          return d.n;
        else
          return 1;
      },
      v_);
}

bool DomainSpec::contains(const ComplexPoint& p) const {
  if (p.dim() != dim())
    throw DimensionError("point dimension does not match domain dimension");
  return gauge(p) < 1.0;
}

double DomainSpec::gauge(const ComplexPoint& p) const {
  if (p.dim() != dim())
    throw DimensionError("point dimension does not match domain dimension");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return std::abs(p.z1());
        } else if constexpr (std::is_same_v<T, Disc>) {
          return std::abs(p.z1() - d.center) / d.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          double r = std::abs(p.z1());
          if (r == 0.0) return HUGE_VAL;
          return std::max(r / d.r_out, d.r_in / r);
        } else if constexpr (std::is_same_v<T, Polydisc>) {
          return std::max(std::abs(p.z1()) / d.r1, std::abs(p.z2()) / d.r2);
        } else {
          double s = std::norm(p.z1());
          if (d.n == 2) s += std::norm(p.z2());
          return std::sqrt(s);
        }
      },
      v_);
}

std::array<std::pair<double, double>, 4> DomainSpec::bounding_box() const {
  std::array<std::pair<double, double>, 4> box{};
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          box[0] = box[1] = {-1.0, 1.0};
        } else if constexpr (std::is_same_v<T, Disc>) {
          box[0] = {d.center.real() - d.radius, d.center.real() + d.radius};
          box[1] = {d.center.imag() - d.radius, d.center.imag() + d.radius};
        } else if constexpr (std::is_same_v<T, Annulus>) {
          box[0] = box[1] = {-d.r_out, d.r_out};
        } else if constexpr (std::is_same_v<T, Polydisc>) {
          box[0] = box[1] = {-d.r1, d.r1};
          box[2] = box[3] = {-d.r2, d.r2};
        } else {
          for (int i = 0; i < 2 * d.n; ++i) box[i] = {-1.0, 1.0};
        }
      },
      v_);
  return box;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>)
          os << "unit_disc";
        else if constexpr (std::is_same_v<T, Disc>)
          os << "disc(center=" << d.center << ", r=" << d.radius << ")";
        else if constexpr (std::is_same_v<T, Annulus>)
          os << "annulus(" << d.r_in << ", " << d.r_out << ")";
        else if constexpr (std::is_same_v<T, Polydisc>)
          os << "polydisc(" << d.r1 << ", " << d.r2 << ")";
        else
          os << "unit_ball(" << d.n << ")";
      },
      v_);
  return os.str();
}

// ---------------------------------------------------------------------------
// TorusArcs

namespace {

// Canonicalize: wrap into [0,1), sort, merge overlapping or touching arcs.
// When the input is already canonical the stored lengths pass through
// untouched, which keeps construction-defined measures exact.
std::vector<TorusInterval> normalize_intervals(std::vector<TorusInterval> iv) {
  std::vector<TorusInterval> wrapped;
  wrapped.reserve(iv.size());
  for (const auto& a : iv) {
    if (!(a.len > 0)) continue;
    if (a.len >= 1.0) return {{0.0, 1.0}};
    double lo = wrap_turn(a.lo);
    if (lo + a.len > 1.0) {
      double first = 1.0 - lo;
      wrapped.push_back({lo, first});
      wrapped.push_back({0.0, a.len - first});
    } else {
      wrapped.push_back({lo, a.len});
    }
  }
  if (wrapped.empty()) return wrapped;
  bool sorted_disjoint = true;
  for (size_t k = 0; k + 1 < wrapped.size(); ++k) {
    if (!(wrapped[k].hi() < wrapped[k + 1].lo)) {
      sorted_disjoint = false;
      break;
    }
  }
  if (sorted_disjoint) return wrapped;

  std::sort(wrapped.begin(), wrapped.end(),
            [](const TorusInterval& x, const TorusInterval& y) { return x.lo < y.lo; });
  std::vector<TorusInterval> out;
  double lo = wrapped[0].lo, hi = wrapped[0].hi();
  for (size_t k = 1; k < wrapped.size(); ++k) {
    if (wrapped[k].lo <= hi) {
      hi = std::max(hi, wrapped[k].hi());
    } else {
      out.push_back({lo, hi - lo});
      lo = wrapped[k].lo;
      hi = wrapped[k].hi();
    }
  }
  out.push_back({lo, hi - lo});
  // Arcs crossing the wrap point stay split into their [.,1) and [0,.) parts.
  if (out.size() == 1 && out[0].len >= 1.0) return {{0.0, 1.0}};
  return out;
}

}  // namespace

TorusArcs TorusArcs::full_circle() {
  TorusArcs a;
  a.iv_ = {{0.0, 1.0}};
  return a;
}

TorusArcs TorusArcs::from_radians(double theta1, double theta2) {
  if (!(theta1 >= 0.0) || !(theta1 < theta2) || !(theta2 <= kTwoPi + 1e-15))
    throw ValidationError("arc requires 0 <= theta1 < theta2 <= 2*pi");
  TorusArcs a;
  double len = (theta2 - theta1) / kTwoPi;
  if (len >= 1.0) return full_circle();
  a.iv_ = normalize_intervals({{theta1 / kTwoPi, len}});
  return a;
}

TorusArcs TorusArcs::from_intervals(std::vector<TorusInterval> iv) {
  TorusArcs a;
  a.iv_ = normalize_intervals(std::move(iv));
  return a;
}

double TorusArcs::measure() const {
  CompensatedSum s;
  for (const auto& a : iv_) s.add(a.len);
  return s.value();
}

TorusArcs TorusArcs::unite(const TorusArcs& o) const {
  std::vector<TorusInterval> all = iv_;
  all.insert(all.end(), o.iv_.begin(), o.iv_.end());
  return from_intervals(std::move(all));
}

TorusArcs TorusArcs::intersect(const TorusArcs& o) const {
  std::vector<TorusInterval> out;
  for (const auto& a : iv_) {
    for (const auto& b : o.iv_) {
      double lo = std::max(a.lo, b.lo);
      double hi = std::min(a.hi(), b.hi());
      if (hi > lo) out.push_back({lo, hi - lo});
    }
  }
  return from_intervals(std::move(out));
}

TorusArcs TorusArcs::complement() const {
  if (iv_.empty()) return full_circle();
  std::vector<TorusInterval> out;
  double prev_hi = iv_.back().hi() - 1.0;  // wrap gap start
  for (const auto& a : iv_) {
    if (a.lo > prev_hi) out.push_back({prev_hi, a.lo - prev_hi});
    prev_hi = a.hi();
  }
  return from_intervals(std::move(out));
}

TorusArcs TorusArcs::enlarge(double eps) const {
  if (eps <= 0.0) return *this;
  std::vector<TorusInterval> out;
  out.reserve(iv_.size());
  for (const auto& a : iv_) out.push_back({a.lo - eps, a.len + 2.0 * eps});
  return from_intervals(std::move(out));
}

TorusArcs TorusArcs::rotate(double delta) const {
  std::vector<TorusInterval> out;
  out.reserve(iv_.size());
  for (const auto& a : iv_) out.push_back({wrap_turn(a.lo + delta), a.len});
  return from_intervals(std::move(out));
}

TorusArcs TorusArcs::preimage_multiply(int m, double shift) const {
  if (m < 1) throw ValidationError("multiplier must be >= 1");
  // t solves m*t + shift = u + j  =>  t = (u - shift + j)/m for j = 0..m-1.
  std::vector<TorusInterval> out;
  out.reserve(iv_.size() * static_cast<size_t>(m));
  const double inv = 1.0 / m;
  for (const auto& a : iv_) {
    for (int j = 0; j < m; ++j) {
      out.push_back({wrap_turn((a.lo - shift + j) * inv), a.len * inv});
    }
  }
  return from_intervals(std::move(out));
}

bool TorusArcs::contains(double t) const {
  t = wrap_turn(t);
  for (const auto& a : iv_) {
    if (t >= a.lo && t <= a.hi()) return true;
    // closed arcs wrap: hi may exceed 1 only pre-normalization, but t=0 may
    // land on an arc ending exactly at 1.
    if (a.hi() >= 1.0 && t == 0.0) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// SetExpr factories

namespace sets {

SetPtr closed_disc(Complex center, double radius) {
  if (!(radius > 0)) throw ValidationError("disc radius must be positive");
  require_finite(center, "disc center");
  return std::make_shared<SetExpr>(ClosedDiscSet{center, radius}, 1);
}

SetPtr open_disc(Complex center, double radius) {
  if (!(radius > 0)) throw ValidationError("disc radius must be positive");
  require_finite(center, "disc center");
  return std::make_shared<SetExpr>(OpenDiscSet{center, radius}, 1);
}

SetPtr box(Complex lo, Complex hi) {
  if (!(lo.real() <= hi.real()) || !(lo.imag() <= hi.imag()))
    throw ValidationError("box corners must satisfy lo <= hi per axis");
  return std::make_shared<SetExpr>(BoxSet{lo, hi}, 1);
}

SetPtr arc(double theta1, double theta2) {
  if (!(theta1 >= 0.0) || !(theta1 < theta2) || !(theta2 <= kTwoPi + 1e-15))
    throw ValidationError("arc requires 0 <= theta1 < theta2 <= 2*pi");
  return std::make_shared<SetExpr>(ArcSet{theta1, theta2}, 1);
}

SetPtr cantor(int level, double ratio) {
  if (level < 0 || level > 20) throw ValidationError("cantor level must be in [0, 20]");
  if (!(ratio > 0.0) || !(ratio < 1.0)) throw ValidationError("cantor ratio must be in (0, 1)");
  // Remove the middle `ratio` fraction of every arc, `level` times, starting
  // from the full circle. Child length is computed as 0.5*(len*(1-ratio)) so
  // the total measure follows the product recurrence exactly.
  std::vector<TorusInterval> arcs = {{0.0, 1.0}};
  for (int m = 0; m < level; ++m) {
    std::vector<TorusInterval> next;
    next.reserve(arcs.size() * 2);
    for (const auto& a : arcs) {
      double child = 0.5 * (a.len * (1.0 - ratio));
      next.push_back({a.lo, child});
      next.push_back({a.lo + a.len - child, child});
    }
    arcs = std::move(next);
  }
  return std::make_shared<SetExpr>(CantorSet{level, ratio, std::move(arcs)}, 1);
}

SetPtr points(std::vector<ComplexPoint> pts) {
  int dim = pts.empty() ? 1 : pts.front().dim();
  for (const auto& p : pts)
    if (p.dim() != dim) throw DimensionError("finite point set mixes dimensions");
  return std::make_shared<SetExpr>(FinitePointsSet{std::move(pts), dim}, dim);
}

SetPtr empty(int dim) {
  if (dim != 1 && dim != 2) throw ValidationError("set dimension must be 1 or 2");
  return std::make_shared<SetExpr>(FinitePointsSet{{}, dim}, dim);
}

SetPtr product(SetPtr a, SetPtr b) {
  if (!a || !b) throw ValidationError("product of null sets");
  if (a->dim() != 1 || b->dim() != 1)
    throw DimensionError("product factors must be one-dimensional");
  return std::make_shared<SetExpr>(ProductSet{a, b}, 2);
}

SetPtr set_union(SetPtr a, SetPtr b) {
  if (!a || !b) throw ValidationError("union of null sets");
  if (a->dim() != b->dim()) throw DimensionError("union operands differ in dimension");
  return std::make_shared<SetExpr>(UnionSet{a, b}, a->dim());
}

SetPtr set_intersection(SetPtr a, SetPtr b) {
  if (!a || !b) throw ValidationError("intersection of null sets");
  if (a->dim() != b->dim()) throw DimensionError("intersection operands differ in dimension");
  return std::make_shared<SetExpr>(IntersectionSet{a, b}, a->dim());
}

SetPtr complement(SetPtr a) {
  if (!a) throw ValidationError("complement of null set");
  return std::make_shared<SetExpr>(ComplementSet{a}, a->dim());
}

}  // namespace sets

// ---------------------------------------------------------------------------
// Membership

namespace {

// Angle of z in turns, in [0, 1). Requires z != 0.
double angle_turns(Complex z) {
  double t = std::atan2(z.imag(), z.real()) / kTwoPi;
  return wrap_turn(t);
}

bool on_unit_circle(Complex z) { return std::abs(z) == 1.0; }

}  // namespace

bool member_margin(const SetExpr& set, const ComplexPoint& p, double margin) {
  if (set.dim() != p.dim())
    throw DimensionError("point dimension does not match set dimension");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClosedDiscSet>) {
          return std::abs(p.z1() - s.center) <= s.radius + margin;
        } else if constexpr (std::is_same_v<T, OpenDiscSet>) {
          // Open primitives never gain from a positive margin.
          double m = std::min(margin, 0.0);
          return std::abs(p.z1() - s.center) < s.radius + m;
        } else if constexpr (std::is_same_v<T, BoxSet>) {
          return p.z1().real() >= s.lo.real() - margin && p.z1().real() <= s.hi.real() + margin &&
                 p.z1().imag() >= s.lo.imag() - margin && p.z1().imag() <= s.hi.imag() + margin;
        } else if constexpr (std::is_same_v<T, ArcSet>) {
          Complex z = p.z1();
          if (margin <= 0.0) {
            if (!on_unit_circle(z)) return false;
            double t = angle_turns(z);
            double t1 = s.theta1 / kTwoPi, t2 = s.theta2 / kTwoPi;
            return (t >= t1 && t <= t2) || (t + 1.0 >= t1 && t + 1.0 <= t2);
          }
          // Distance from z to the arc: radial and angular parts combined.
          double r = std::abs(z);
          if (r == 0.0) return 1.0 <= margin;
          double t = angle_turns(z) * kTwoPi;
          double a = s.theta1, b = s.theta2;
          double dang;
          if ((t >= a && t <= b) || (t + kTwoPi >= a && t + kTwoPi <= b)) {
            dang = 0.0;
          } else {
            auto circ = [](double x) {
              x = std::fmod(std::abs(x), kTwoPi);
              return std::min(x, kTwoPi - x);
            };
            dang = std::min(circ(t - a), circ(t - b));
          }
          double d2 = r * r + 1.0 - 2.0 * r * std::cos(dang);
          return d2 <= margin * margin;
        } else if constexpr (std::is_same_v<T, CantorSet>) {
          Complex z = p.z1();
          if (margin <= 0.0) {
            if (!on_unit_circle(z)) return false;
            double t = angle_turns(z);
            for (const auto& a : s.arcs)
              if (t >= a.lo && t <= a.hi()) return true;
            return false;
          }
          double r = std::abs(z);
          if (r == 0.0) return 1.0 <= margin;
          double t = angle_turns(z);
          for (const auto& a : s.arcs) {
            double dturn;
            if (t >= a.lo && t <= a.hi()) {
              dturn = 0.0;
            } else {
              auto circ = [](double x) {
                x = std::abs(x - std::floor(x + 0.5));
                return x;
              };
              dturn = std::min(circ(t - a.lo), circ(t - a.hi()));
            }
            double d2 = r * r + 1.0 - 2.0 * r * std::cos(dturn * kTwoPi);
            if (d2 <= margin * margin) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, FinitePointsSet>) {
          for (const auto& q : s.points) {
            if (margin <= 0.0) {
              if (q == p) return true;
            } else {
              double d2 = std::norm(p.z1() - q.z1());
              if (p.dim() == 2) d2 += std::norm(p.z2() - q.z2());
              if (d2 <= margin * margin) return true;
            }
          }
          return false;
        } else if constexpr (std::is_same_v<T, ProductSet>) {
          return member_margin(*s.a, ComplexPoint(p.z1()), margin) &&
                 member_margin(*s.b, ComplexPoint(p.z2()), margin);
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          return member_margin(*s.a, p, margin) || member_margin(*s.b, p, margin);
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          return member_margin(*s.a, p, margin) && member_margin(*s.b, p, margin);
        } else {
          return !member_margin(*s.a, p, -margin);
        }
      },
      set.variant());
}

bool member(const SetExpr& set, const ComplexPoint& p) { return member_margin(set, p, 0.0); }

// ---------------------------------------------------------------------------
// Arc algebra

TorusArcs to_torus_arcs(const SetExpr& set) {
  if (set.dim() != 1) throw DimensionError("boundary sets live on the unit circle (dim 1)");
  return std::visit(
      [&](const auto& s) -> TorusArcs {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ArcSet>) {
          return TorusArcs::from_radians(s.theta1, s.theta2);
        } else if constexpr (std::is_same_v<T, CantorSet>) {
          return TorusArcs::from_intervals(s.arcs);
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          return to_torus_arcs(*s.a).unite(to_torus_arcs(*s.b));
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          return to_torus_arcs(*s.a).intersect(to_torus_arcs(*s.b));
        } else if constexpr (std::is_same_v<T, ComplementSet>) {
          return to_torus_arcs(*s.a).complement();
        } else {
          throw ValidationError("set contains a non-boundary primitive");
        }
      },
      set.variant());
}

double arc_measure(const SetExpr& set) { return to_torus_arcs(set).measure(); }

BoundarySplit split_boundary_set(const SetExpr& set) {
  if (set.dim() != 1) throw DimensionError("boundary sets live on the unit circle (dim 1)");
  return std::visit(
      [&](const auto& s) -> BoundarySplit {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePointsSet>) {
          BoundarySplit out;
          for (const auto& q : s.points) {
            double r = std::abs(q.z1());
            if (std::abs(r - 1.0) > 1e-12)
              throw ValidationError("finite boundary points must lie on the unit circle");
            out.point_angles.push_back(angle_turns(q.z1()));
          }
          return out;
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          BoundarySplit a = split_boundary_set(*s.a);
          BoundarySplit b = split_boundary_set(*s.b);
          a.arcs = a.arcs.unite(b.arcs);
          a.point_angles.insert(a.point_angles.end(), b.point_angles.begin(),
                                b.point_angles.end());
          return a;
        } else {
          return BoundarySplit{to_torus_arcs(set), {}};
        }
      },
      set.variant());
}

// ---------------------------------------------------------------------------
// TorusSet

namespace {
bool intervals_overlap(const TorusInterval& a, const TorusInterval& b) {
  // Positive-length overlap on the circle.
  auto norm = TorusArcs::from_intervals({a}).intersect(TorusArcs::from_intervals({b}));
  return norm.measure() > 0.0;
}
}  // namespace

TorusSet::TorusSet(std::vector<Rect> rects) : rects_(std::move(rects)) {
  for (const auto& r : rects_) {
    if (!(r.i.len > 0.0) || !(r.j.len > 0.0))
      throw ValidationError("torus rectangle sides must have positive length");
    if (r.i.len > 1.0 || r.j.len > 1.0)
      throw ValidationError("torus rectangle sides exceed the circle");
  }
  for (size_t a = 0; a < rects_.size(); ++a)
    for (size_t b = a + 1; b < rects_.size(); ++b)
      if (intervals_overlap(rects_[a].i, rects_[b].i) &&
          intervals_overlap(rects_[a].j, rects_[b].j))
        throw ValidationError("torus rectangles must be pairwise disjoint");
}

TorusSet TorusSet::swapped() const {
  std::vector<Rect> out;
  out.reserve(rects_.size());
  for (const auto& r : rects_) out.push_back({r.j, r.i});
  return TorusSet(std::move(out));
}

double TorusSet::measure() const {
  CompensatedSum s;
  for (const auto& r : rects_) s.add(r.i.len * r.j.len);
  return s.value();
}

}  // namespace pluri
