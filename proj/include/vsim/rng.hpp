#pragma once

#include <cmath>
#include <cstdint>

namespace vsim {

// Deterministic 64-bit generator (splitmix64, Steele/Lea/Flood mixing
// constants). Pinned here so seeded runs replay identically regardless of
// platform or standard library; std::mt19937 plus std:: distributions would
// not give that guarantee for the derived real draws.
//
// Reference stream, seed 0, first ten outputs:
//   0xE220A8397B1DCDAF 0x6E789E6AA1B965F4 0x06C45D188009454F 0xF88BB8A8724C81EC
//   0x1B39896A51A8749B 0x53CB9F0C747EA2EA 0x2C829ABE1F4532E1 0xC584133AC916AB3C
//   0x3EE5789041C98AC3 0xF3B8488C368CB0A6
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 random mantissa bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // uniform integer in [0, n); n must be positive
  int uniform_int(int n) {
    int v = static_cast<int>(next_double() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

  // Box-Muller; consumes exactly two raw draws per call
  double normal(double mean, double stddev) {
    double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  uint64_t state_;
};

}  // namespace vsim
