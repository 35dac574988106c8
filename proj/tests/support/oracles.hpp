#pragma once

// Test-only oracles, independent of the library's solver paths.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Largest function on [r_lo, 1] that is convex and nondecreasing in log r,
// bounded by 0, and <= -1 on [r_lo, r_A]: computed by 1-D obstacle relaxation
// on a uniform log-radial mesh. This is the radial reduite of the centered
// disc obstacle in the unit disc.
inline std::vector<double> radial_envelope(double r_A, int n, double r_lo = 1e-4) {
  double s_lo = std::log(r_lo);
  std::vector<double> s(n), v(n, 0.0), g(n, 0.0);
  for (int i = 0; i < n; ++i) {
    s[i] = s_lo + (0.0 - s_lo) * i / (n - 1);
    if (s[i] <= std::log(r_A)) g[i] = -1.0;
  }
  v.back() = 0.0;
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double change = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      double avg = 0.5 * (v[i - 1] + v[i + 1]);
      double nv = std::min(g[i], avg);
      change = std::max(change, v[i] - nv);
      v[i] = nv;
    }
    // left end: no constraint from the removed origin; extend convexly
    double nv0 = std::min(g[0], v[1]);
    change = std::max(change, v[0] - nv0);
    v[0] = nv0;
    if (change < 1e-12) break;
  }
  return v;
}

// Evaluate the radial oracle at radius r by linear interpolation in log r.
inline double radial_envelope_at(const std::vector<double>& v, double r, double r_lo = 1e-4) {
  double s_lo = std::log(r_lo);
  double t = (std::log(r) - s_lo) / (0.0 - s_lo) * (static_cast<double>(v.size()) - 1);
  int i = std::max(0, std::min(static_cast<int>(v.size()) - 2, static_cast<int>(t)));
  double f = t - i;
  return v[i] * (1 - f) + v[i + 1] * f;
}

// Composite Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
  double m = 0.5 * (a + b);
  double s1 = simpson(f, a, b, 2);
  double s2 = simpson(f, a, m, 2) + simpson(f, m, b, 2);
  if (depth <= 0 || std::abs(s1 - s2) < 15 * tol) return s2 + (s2 - s1) / 15.0;
  return adaptive_simpson(f, a, m, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, tol / 2, depth - 1);
}

}  // namespace oracles
