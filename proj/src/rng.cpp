#include "riesz/rng.hpp"

#include <cmath>

namespace riesz {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(make_engine(seed, stream)), seed_(seed), stream_(stream) {}

std::uint64_t Rng::index(std::uint64_t n) {
  // Lemire-style rejection on the top bits to avoid modulo bias.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
  std::uint64_t r = engine_();
  while (r >= limit) {
    r = engine_();
  }
  return r % n;
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean > 0.0)) {
    return 0;
  }
  std::uint64_t count = 0;
  // exp(-mean) underflows long before mean = 700; split into chunks.
  constexpr double kChunk = 200.0;
  while (mean > kChunk) {
    count += poisson(kChunk);
    mean -= kChunk;
  }
  const double u = uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u > cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && cdf < u) {
      break;  // rounding left a gap at the far tail
    }
  }
  return count + k;
}

}  // namespace riesz
