#pragma once

#include <limits>

namespace riesz {

/// +infinity energy sentinel: coincident points, x = 0 for the Riesz kernel.
inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

inline bool is_infinite_energy(double e) { return e == kInfiniteEnergy; }

/// Dimension d and Riesz exponent s, restricted to the non-integrable range d-1 < s < d.
class RieszParams {
 public:
  RieszParams(int d, double s);

  int dim() const { return d_; }
  double s() const { return s_; }

 private:
  int d_;
  double s_;
};

bool operator==(const RieszParams& a, const RieszParams& b);

}  // namespace riesz
