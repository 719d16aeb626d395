#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace riesz {

/// Per-chain random stream: mt19937_64 seeded from (seed, stream) through
/// std::seed_seq; uniforms from the top 53 bits, Poisson by inversion.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);
  /// Poisson(mean) by sequential inversion (chunked for large means).
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static std::string algorithm() { return "mt19937_64/seed_seq(seed_lo,seed_hi,stream)/53-bit-uniform"; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace riesz
