#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>

namespace metapop {

// Lossless text form of a double (17 significant digits round-trips exactly).
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Seeded generator producing identical streams on every platform/run.
// Uniform doubles are built from the top 53 bits of the raw 64-bit output,
// not through std::uniform_real_distribution (whose stream is
// implementation-defined).
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace metapop
