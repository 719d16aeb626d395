#pragma once

#include <cmath>

namespace riesz {

/// Neumaier's variant of Kahan summation. Also tracks Σ|term| so callers can
/// report a rounding bound alongside the sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;

  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    magnitude_ += std::abs(x);
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    magnitude_ += other.magnitude_ - std::abs(other.sum_) - std::abs(other.comp_);
    return *this;
  }

  double value() const { return sum_ + comp_; }
  /// Σ|terms| seen so far.
  double magnitude() const { return magnitude_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double magnitude_ = 0.0;
};

}  // namespace riesz
