#include "riesz/params.hpp"

#include <cmath>
#include <sstream>

#include "riesz/error.hpp"

namespace riesz {

RieszParams::RieszParams(int d, double s) : d_(d), s_(s) {
  if (d < 1) {
    throw ParameterError("dimension d must be >= 1");
  }
  if (!std::isfinite(s) || !(s > d - 1) || !(s < d)) {
    std::ostringstream msg;
    msg << "s must lie in (d-1, d) = (" << d - 1 << ", " << d << "), got " << s;
    throw ParameterError(msg.str());
  }
}

bool operator==(const RieszParams& a, const RieszParams& b) {
  return a.dim() == b.dim() && a.s() == b.s();
}

}  // namespace riesz
