#pragma once

#include <cmath>
#include <cstdint>

namespace pluri {

// Neumaier compensated accumulator. Keeps measure arithmetic additive at the
// last bit for the dyadic and equal-length arc families the tests exercise.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace pluri
