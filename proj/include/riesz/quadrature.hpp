#pragma once

#include <functional>
#include <span>
#include <vector>

namespace riesz {

struct QuadratureResult {
  double value = 0.0;
  /// Error estimate: the integrator's own estimate, or the difference between
  /// two resolutions for fixed rules.
  double error = 0.0;
};

/// Nodes and weights of a one-dimensional rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// q-point Gauss–Legendre rule on [-1, 1] (Newton iteration on P_q).
Rule1D gauss_legendre(int q);

/// Composite Gauss–Legendre rule: q points on every panel between consecutive
/// breakpoints. `breakpoints` must be sorted and include both endpoints.
Rule1D composite_gauss(std::span<const double> breakpoints, int q);

/// Sorted, de-duplicated panel edges for [lo, hi] with `panels` equal panels
/// plus any extra cut points that fall inside.
std::vector<double> panel_edges(double lo, double hi, int panels, std::span<const double> cuts = {});

/// Adaptive Gauss–Kronrod (G15/K31) on a finite interval; throws
/// AccuracyError when the estimate stays above `tol`.
QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace riesz
