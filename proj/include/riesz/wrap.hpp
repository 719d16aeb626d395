#pragma once

#include <cmath>

namespace riesz {

/// Representative of x in the half-open period [-L/2, L/2).
inline double wrap_coordinate(double x, double L) {
  double r = x - L * std::floor(x / L + 0.5);
  if (r >= 0.5 * L) {
    r -= L;
  }
  if (r < -0.5 * L) {
    r += L;
  }
  return r;
}

}  // namespace riesz
