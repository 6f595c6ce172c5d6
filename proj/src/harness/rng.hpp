#pragma once

#include <cmath>
#include <cstdint>

#include "spectral/scalar.hpp"

namespace spectral::harness {

/// splitmix64-based generator. Self-contained so that seeded outputs are
/// byte-identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  long int_in(long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    double u1 = unit(), u2 = unit();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Complex cnormal() {
    double u1 = unit(), u2 = unit();
    if (u1 <= 0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(6.283185307179586 * u2), r * std::sin(6.283185307179586 * u2)};
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for trial i of a seeded run; stable under any
/// parallel schedule.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  Rng r(seed ^ (0x9e3779b97f4a7c15ULL + trial * 0xda942042e4dd58b5ULL));
  return r.next();
}

}  // namespace spectral::harness
