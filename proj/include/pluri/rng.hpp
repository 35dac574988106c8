#pragma once

#include <cmath>
#include <cstdint>

#include "pluri/numeric.hpp"

namespace pluri {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based generator: output i of stream s under root seed k is
// mix(key(k,s) + i*GOLDEN), so streams can be split without shared state and
// every draw is reproducible from (seed, stream, counter).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream ^ 0x6C62272E07BB0142ull))) {}

  CounterRng split(std::uint64_t substream) const {
    CounterRng r(0, 0);
    r.key_ = mix64(key_ ^ mix64(substream ^ 0x27220A95FE5CA9ull));
    r.counter_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Standard normal (Box-Muller, no cached spare so draws stay counter-pure).
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pluri
