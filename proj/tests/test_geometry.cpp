#include <doctest.h>

#include <cmath>

#include "pluri/geometry.hpp"
#include "pluri/rng.hpp"

using namespace pluri;

namespace {
constexpr double kPi = kTwoPi / 2;

// Random dyadic arc families: endpoints on multiples of 1/1024, where interval
// arithmetic is exact.
std::vector<TorusInterval> random_dyadic_arcs(CounterRng& rng, int max_arcs) {
  int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_arcs));
  std::vector<int> cuts;
  for (int i = 0; i < 2 * n; ++i) cuts.push_back(static_cast<int>(rng.next_u64() % 1024));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<TorusInterval> arcs;
  for (std::size_t i = 0; i + 1 < cuts.size(); i += 2)
    arcs.push_back({cuts[i] / 1024.0, (cuts[i + 1] - cuts[i]) / 1024.0});
  return arcs;
}
}  // namespace

TEST_CASE("member: disc primitives") {
  auto closed = sets::closed_disc({0, 0}, 0.5);
  CHECK(member(*closed, ComplexPoint(Complex(0.3, 0.0))));
  CHECK(member(*closed, ComplexPoint(Complex(0.5, 0.0))));  // boundary included
  CHECK_FALSE(member(*closed, ComplexPoint(Complex(0.51, 0.0))));

  auto open_comp = sets::complement(sets::open_disc({0, 0}, 0.5));
  CHECK_FALSE(member(*open_comp, ComplexPoint(Complex(0.3, 0.0))));
  CHECK(member(*open_comp, ComplexPoint(Complex(0.5, 0.0))));

  auto b = sets::box({-0.5, -0.25}, {0.5, 0.25});
  CHECK(member(*b, ComplexPoint(Complex(0.5, 0.25))));
  CHECK_FALSE(member(*b, ComplexPoint(Complex(0.5, 0.26))));
}

TEST_CASE("member: dimension mismatch is a structured error") {
  auto s = sets::closed_disc({0, 0}, 0.5);
  CHECK_THROWS_AS(member(*s, ComplexPoint(Complex(0, 0), Complex(0, 0))), DimensionError);
  auto p = sets::product(s, s);
  CHECK_THROWS_AS(member(*p, ComplexPoint(Complex(0, 0))), DimensionError);
  CHECK(member(*p, ComplexPoint(Complex(0.1, 0), Complex(0.2, 0.1))));
}

TEST_CASE("member: products and finite points") {
  auto pr = sets::product(sets::closed_disc({0, 0}, 0.5), sets::closed_disc({0, 0}, 0.25));
  CHECK(member(*pr, ComplexPoint(Complex(0.5, 0), Complex(0, 0.25))));
  CHECK_FALSE(member(*pr, ComplexPoint(Complex(0.5, 0), Complex(0, 0.3))));

  auto pts = sets::points({ComplexPoint(Complex(0.25, -0.5)), ComplexPoint(Complex(0, 0))});
  CHECK(member(*pts, ComplexPoint(Complex(0.25, -0.5))));
  CHECK_FALSE(member(*pts, ComplexPoint(Complex(0.25, -0.4999))));
  CHECK_FALSE(member(*sets::empty(1), ComplexPoint(Complex(0, 0))));
}

TEST_CASE("member: De Morgan rewrites agree on random trees") {
  CounterRng rng(7, 1);
  for (int trial = 0; trial < 200; ++trial) {
    CounterRng draw = rng.split(trial);
    auto prim = [&]() -> SetPtr {
      double cx = draw.uniform(-0.5, 0.5), cy = draw.uniform(-0.5, 0.5);
      double r = draw.uniform(0.05, 0.6);
      switch (draw.next_u64() % 3) {
        case 0: return sets::closed_disc({cx, cy}, r);
        case 1: return sets::open_disc({cx, cy}, r);
        default:
          return sets::box({cx - r, cy - r}, {cx + r, cy + r});
      }
    };
    SetPtr a = prim(), b = prim();
    SetPtr lhs1 = sets::complement(sets::set_union(a, b));
    SetPtr rhs1 = sets::set_intersection(sets::complement(a), sets::complement(b));
    SetPtr lhs2 = sets::complement(sets::set_intersection(a, b));
    SetPtr rhs2 = sets::set_union(sets::complement(a), sets::complement(b));
    for (int k = 0; k < 20; ++k) {
      ComplexPoint p(Complex(draw.uniform(-1, 1), draw.uniform(-1, 1)));
      CHECK(member(*lhs1, p) == member(*rhs1, p));
      CHECK(member(*lhs2, p) == member(*rhs2, p));
    }
  }
}

TEST_CASE("arc_measure: basic arcs") {
  CHECK(arc_measure(*sets::arc(0, kPi)) == 0.5);
  CHECK(arc_measure(*sets::cantor(1, 1.0 / 3.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(arc_measure(*sets::set_union(sets::arc(0, kPi / 2), sets::arc(kPi, 1.5 * kPi))) == 0.5);
}

TEST_CASE("arc_measure: rejects interior primitives") {
  CHECK_THROWS_AS(arc_measure(*sets::closed_disc({0, 0}, 0.5)), ValidationError);
  CHECK_THROWS_AS(arc_measure(*sets::set_union(sets::arc(0, 1), sets::points({ComplexPoint(
                                                    Complex(1, 0))}))),
                  ValidationError);
}

TEST_CASE("arc_measure: additive over disjoint dyadic arcs, exactly") {
  CounterRng rng(11, 2);
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng draw = rng.split(trial);
    auto arcs = random_dyadic_arcs(draw, 6);
    if (arcs.size() < 2) continue;
    std::size_t half = arcs.size() / 2;
    std::vector<TorusInterval> a(arcs.begin(), arcs.begin() + half);
    std::vector<TorusInterval> b(arcs.begin() + half, arcs.end());
    TorusArcs A = TorusArcs::from_intervals(a);
    TorusArcs B = TorusArcs::from_intervals(b);
    CHECK(A.unite(B).measure() == A.measure() + B.measure());
  }
}

TEST_CASE("arc_measure: cantor iterates follow the construction recurrence exactly") {
  for (double ratio : {1.0 / 3.0, 0.2, 0.5}) {
    double expected = 1.0;
    for (int m = 1; m <= 20; ++m) {
      expected *= (1.0 - ratio);
      CHECK(arc_measure(*sets::cantor(m, ratio)) == expected);
    }
  }
  auto c = sets::cantor(5, 1.0 / 3.0);
  CHECK(std::get<CantorSet>(c->variant()).arcs.size() == 32);
}

TEST_CASE("torus arcs: boolean algebra") {
  TorusArcs a = TorusArcs::from_radians(0, kPi);
  TorusArcs b = TorusArcs::from_radians(kPi / 2, 1.5 * kPi);
  CHECK(a.unite(b).measure() == 0.75);
  CHECK(a.intersect(b).measure() == 0.25);
  CHECK(a.complement().measure() == 0.5);
  CHECK(a.complement().intersect(a).measure() == 0.0);
  // enlargement closes the gap across the wrap point
  TorusArcs c = TorusArcs::from_intervals({{0.95, 0.04}, {0.01, 0.04}});
  TorusArcs ce = c.enlarge(0.011);
  CHECK(ce.contains(0.0));
  CHECK(ce.contains(0.999));
  // enlarged arcs overlap by 0.002 across the wrap
  CHECK(ce.measure() == doctest::Approx(0.04 + 0.04 + 4 * 0.011 - 0.002).epsilon(1e-12));
  CHECK(ce.complement().intersect(ce).measure() == 0.0);
}

TEST_CASE("torus_measure: products, additivity, swap invariance") {
  TorusSet one({{TorusInterval{0.1, 0.3}, TorusInterval{0.5, 0.2}}});
  CHECK(one.measure() == 0.3 * 0.2);
  TorusSet empty_set{};
  CHECK(empty_set.measure() == 0.0);
  TorusSet two({{TorusInterval{0.0, 0.3}, TorusInterval{0.5, 0.2}},
                {TorusInterval{0.4, 0.1}, TorusInterval{0.0, 0.5}}});
  CHECK(two.measure() == 0.3 * 0.2 + 0.1 * 0.5);
  CHECK(two.swapped().measure() == two.measure());

  CHECK_THROWS_AS(TorusSet({{TorusInterval{0.0, 0.4}, TorusInterval{0.0, 0.4}},
                            {TorusInterval{0.3, 0.2}, TorusInterval{0.3, 0.2}}}),
                  ValidationError);
}

TEST_CASE("torus_measure: swap invariance on random sets") {
  CounterRng rng(13, 3);
  for (int trial = 0; trial < 50; ++trial) {
    CounterRng draw = rng.split(trial);
    // Disjoint I-intervals guarantee rectangle disjointness.
    auto iarcs = random_dyadic_arcs(draw, 3);
    std::vector<TorusSet::Rect> rects;
    for (const auto& i : iarcs) {
      double lo = draw.next_double();
      double len = draw.uniform(0.05, 0.4);
      rects.push_back({i, TorusInterval{lo, len}});
    }
    if (rects.empty()) continue;
    TorusSet C(rects);
    CHECK(C.swapped().measure() == C.measure());
  }
}

TEST_CASE("set validation errors") {
  CHECK_THROWS_AS(sets::arc(-0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(sets::arc(2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(sets::cantor(21, 0.3), ValidationError);
  CHECK_THROWS_AS(sets::closed_disc({0, 0}, 0.0), ValidationError);
  CHECK_THROWS_AS(sets::box({0.5, 0}, {0, 1}), ValidationError);
  CHECK_THROWS_AS(sets::product(sets::product(sets::arc(0, 1), sets::arc(0, 1)), sets::arc(0, 1)),
                  DimensionError);
  auto bad_annulus = []() { return DomainSpec(DomainSpec::Variant(Annulus{0.5, 0.5})); };
  CHECK_THROWS_AS(bad_annulus(), ValidationError);
}

TEST_CASE("domain gauges") {
  DomainSpec disc{DomainSpec::Variant{UnitDisc{}}};
  CHECK(disc.gauge(ComplexPoint(Complex(0.5, 0))) == 0.5);
  CHECK(disc.contains(ComplexPoint(Complex(0.5, 0))));
  CHECK_FALSE(disc.contains(ComplexPoint(Complex(1.0, 0))));

  DomainSpec poly{DomainSpec::Variant{Polydisc{1.0, 2.0}}};
  CHECK(poly.gauge(ComplexPoint(Complex(0.5, 0), Complex(0, 1.0))) == 0.5);

  DomainSpec ball{DomainSpec::Variant{UnitBall{2}}};
  CHECK(ball.gauge(ComplexPoint(Complex(0.6, 0), Complex(0.8, 0))) == doctest::Approx(1.0));

  DomainSpec ann{DomainSpec::Variant{Annulus{0.5, 2.0}}};
  CHECK(ann.contains(ComplexPoint(Complex(1.0, 0))));
  CHECK_FALSE(ann.contains(ComplexPoint(Complex(0.4, 0))));
}
