#include "riesz/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "riesz/error.hpp"

namespace riesz {

Rule1D gauss_legendre(int q) {
  if (q < 1) {
    throw ParameterError("Gauss-Legendre rule needs at least one point");
  }
  Rule1D rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) {
    rule.nodes[q / 2] = 0.0;
  }
  return rule;
}

Rule1D composite_gauss(std::span<const double> breakpoints, int q) {
  if (breakpoints.size() < 2) {
    throw ParameterError("composite rule needs at least two breakpoints");
  }
  const Rule1D base = gauss_legendre(q);
  Rule1D rule;
  rule.nodes.reserve((breakpoints.size() - 1) * q);
  rule.weights.reserve((breakpoints.size() - 1) * q);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < q; ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

std::vector<double> panel_edges(double lo, double hi, int panels, std::span<const double> cuts) {
  std::vector<double> edges;
  for (int i = 0; i <= panels; ++i) {
    edges.push_back(i == panels ? hi : lo + (hi - lo) * i / panels);
  }
  for (double c : cuts) {
    if (c > lo && c < hi) {
      edges.push_back(c);
    }
  }
  std::sort(edges.begin(), edges.end());
  const double eps = 1e-12 * (hi - lo);
  std::vector<double> unique;
  for (double e : edges) {
    if (unique.empty() || e - unique.back() > eps) {
      unique.push_back(e);
    } else if (e == hi) {
      unique.back() = hi;
    }
  }
  return unique;
}

QuadratureResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol * 1e-2, &error);
  if (!(error <= tol) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] reached error " << error << " > " << tol;
    throw AccuracyError(msg.str());
  }
  return {value, error};
}

}  // namespace riesz
