#include "riesz/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "riesz/error.hpp"
#include "riesz/summation.hpp"
#include "riesz/wrap.hpp"

namespace riesz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2j} / (2j)! for j = 1..7.
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    (1.0 / 6.0) / 2.0,
    (-1.0 / 30.0) / 24.0,
    (1.0 / 42.0) / 720.0,
    (-1.0 / 30.0) / 40320.0,
    (5.0 / 66.0) / 3628800.0,
    (-691.0 / 2730.0) / 479001600.0,
    (7.0 / 6.0) / 87178291200.0,
};
constexpr int kEulerMaclaurinTerms = 6;

double rising_factorial(double s, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) {
    r *= s + i;
  }
  return r;
}

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) {
    acc += v * v;
  }
  return std::sqrt(acc);
}

// -(1 - (1 + r^{-2})^{-s/2}) avoided: g2 = r^{-s} (1 - (1 + r^{-2})^{-s/2}).
double g2_from_radius(double s, double r) {
  return std::pow(r, -s) * -std::expm1(-0.5 * s * std::log1p(1.0 / (r * r)));
}

double sphere_area(int d) {
  // |S^{d-1}| = 2 π^{d/2} / Γ(d/2); equals 2 for d = 1.
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// (1/1)∫_{[-1/2,1/2]} |y + m|^{-s} dy for the unit cell, m >= 0.
double unit_cell_mean_1d(double s, int m) {
  if (m == 0) {
    return std::pow(2.0, s) / (1.0 - s);
  }
  const double a = m - 0.5;
  return std::pow(a, 1.0 - s) * std::expm1((1.0 - s) * std::log1p(1.0 / a)) / (1.0 - s);
}

// ∫_{[-1,1]^{m}} (1 + |w|^2)^{-s/2} dw by tensor Gauss (smooth integrand).
double pyramid_weight_integral(double s, int m) {
  if (m == 0) {
    return 1.0;
  }
  const std::vector<double> edges = panel_edges(-1.0, 1.0, 4);
  const Rule1D rule = composite_gauss(edges, 12);
  const std::size_t q = rule.size();
  std::vector<std::size_t> idx(m, 0);
  CompensatedSum acc;
  while (true) {
    double r2 = 0.0;
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      r2 += rule.nodes[idx[i]] * rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    acc += w * std::pow(1.0 + r2, -0.5 * s);
    int i = 0;
    while (i < m && ++idx[i] == q) {
      idx[i] = 0;
      ++i;
    }
    if (i == m) {
      break;
    }
  }
  return acc.value();
}

// Unit-cell mean ∫_{[-1/2,1/2]^d} |y + k|^{-s} dy for k with nonnegative entries.
double unit_cell_mean(double s, std::span<const int> k) {
  const int d = static_cast<int>(k.size());
  int kmax = 0;
  for (int v : k) {
    kmax = std::max(kmax, std::abs(v));
  }
  if (d == 1) {
    return unit_cell_mean_1d(s, kmax);
  }
  if (kmax == 0) {
    // Pyramid split: 2d congruent pyramids, y = y_1 (1, w), w ∈ [-1,1]^{d-1}.
    return 2.0 * d * std::pow(0.5, d - s) / (d - s) * pyramid_weight_integral(s, d - 1);
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(8.0 / kmax)));
  const std::vector<double> edges = panel_edges(-0.5, 0.5, panels);
  const Rule1D rule = composite_gauss(edges, 10);
  const std::size_t q = rule.size();
  std::vector<std::size_t> idx(d, 0);
  CompensatedSum acc;
  while (true) {
    double r2 = 0.0;
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const double y = rule.nodes[idx[i]] + k[i];
      r2 += y * y;
      w *= rule.weights[idx[i]];
    }
    acc += w * std::pow(r2, -0.5 * s);
    int i = 0;
    while (i < d && ++idx[i] == q) {
      idx[i] = 0;
      ++i;
    }
    if (i == d) {
      break;
    }
  }
  return acc.value();
}

int max_truncation(int d) {
  switch (d) {
    case 1:
      return 1 << 20;
    case 2:
      return 64;
    case 3:
      return 12;
    default:
      return 4;
  }
}

// Tail bounds for n = 1; multiply by L^{-s}.
double unit_em_tail(double s, int K) {
  const int j = kEulerMaclaurinTerms + 1;
  return 4.0 * std::abs(kBernoulliOverFactorial[j - 1]) * rising_factorial(s, 2 * j - 1) *
         std::pow(K + 0.5, -s - 2.0 * j + 1.0);
}

double unit_paired_tail(int d, double s, int K) {
  const double c = 0.5 * std::sqrt(static_cast<double>(d));
  if (K <= c) {
    return std::numeric_limits<double>::infinity();
  }
  const double rho = (2.0 * K + 1.0) / (K - c);
  return (d * d / 3.0) * s * (s + 1.0) * std::pow(rho, d - 1) * std::pow(K - c, d - s - 2.0) / (s + 2.0 - d);
}

double unit_tail(int d, double s, int K) { return d == 1 ? unit_em_tail(s, K) : unit_paired_tail(d, s, K); }

}  // namespace

double eval_riesz(const RieszParams& params, double r) {
  r = std::abs(r);
  if (r == 0.0) {
    return kInfiniteEnergy;
  }
  return std::pow(r, -params.s());
}

double eval_riesz(const RieszParams& params, std::span<const double> x) { return eval_riesz(params, norm(x)); }

RieszSplit riesz_split(const RieszParams& params, double r) {
  r = std::abs(r);
  if (r == 0.0) {
    throw SingularityError("riesz_split: g2 is singular at x = 0");
  }
  const double s = params.s();
  return {std::pow(1.0 + r * r, -0.5 * s), g2_from_radius(s, r)};
}

RieszSplit riesz_split(const RieszParams& params, std::span<const double> x) { return riesz_split(params, norm(x)); }

QuadratureResult integrate_g2(const RieszParams& params, double tol) {
  const int d = params.dim();
  const double s = params.s();
  const double area = sphere_area(d);
  // Inner part: ∫_0^1 r^{d-1}(r^{-s} - (1+r^2)^{-s/2}) dr = 1/(d-s) - smooth integral.
  const QuadratureResult inner = adaptive_integrate(
      [&](double r) { return std::pow(r, d - 1) * std::pow(1.0 + r * r, -0.5 * s); }, 0.0, 1.0,
      0.25 * tol / area);
  // Outer part: r = 1/t, t = u^2 smooths the t^{s-d+1} endpoint behaviour.
  const QuadratureResult outer = adaptive_integrate(
      [&](double u) {
        if (u == 0.0) {
          return 0.0;
        }
        const double t = u * u;
        return 2.0 * u * std::pow(t, -d - 1.0) * g2_from_radius(s, 1.0 / t);
      },
      0.0, 1.0, 0.25 * tol / area);
  const double value = area * (1.0 / (d - s) - inner.value + outer.value);
  const double error = area * (inner.error + outer.error) + 8.0 * kEps * std::abs(value);
  if (!(error <= tol)) {
    std::ostringstream msg;
    msg << "integrate_g2: error estimate " << error << " exceeds tolerance " << tol;
    throw AccuracyError(msg.str());
  }
  return {value, error};
}

double integrate_g2_closed_form(const RieszParams& params) {
  const double d = params.dim();
  const double s = params.s();
  return -0.5 * sphere_area(params.dim()) * std::tgamma(0.5 * d) * std::tgamma(0.5 * (s - d)) / std::tgamma(0.5 * s);
}

double cell_mean(const RieszParams& params, int n, std::span<const int> k) {
  if (n < 1) {
    throw ParameterError("cell_mean: n must be >= 1");
  }
  if (static_cast<int>(k.size()) != params.dim()) {
    throw ParameterError("cell_mean: k has the wrong dimension");
  }
  std::vector<int> ak(k.begin(), k.end());
  for (int& v : ak) {
    v = std::abs(v);
  }
  std::sort(ak.begin(), ak.end());  // cell means are invariant under coordinate permutations
  const double L = std::pow(static_cast<double>(n), 1.0 / params.dim());
  return std::pow(L, -params.s()) * unit_cell_mean(params.s(), ak);
}

double cell_mean(const RieszParams& params, int n, int k) {
  const std::array<int, 1> kk{k};
  return cell_mean(params, n, kk);
}

double tail_bound(const RieszParams& params, int n, int K) {
  if (K < 2) {
    throw ParameterError("tail_bound: K must be >= 2");
  }
  const double L = std::pow(static_cast<double>(n), 1.0 / params.dim());
  return std::pow(L, -params.s()) * unit_tail(params.dim(), params.s(), K);
}

double paired_tail_bound(const RieszParams& params, int n, int K) {
  const double L = std::pow(static_cast<double>(n), 1.0 / params.dim());
  return std::pow(L, -params.s()) * unit_paired_tail(params.dim(), params.s(), K);
}

SelfConstant self_constant(const RieszParams& params, int n) {
  const PeriodizedPotential pp(params, n);
  return {pp.self_constant(), pp.epsilon(), 2.0 * pp.tail_bound() + 16.0 * kEps * std::abs(pp.self_constant())};
}

PeriodizedPotential::PeriodizedPotential(const RieszParams& params, int n, std::optional<int> K, double rel_target)
    : params_(params), n_(n) {
  if (n < 1) {
    throw ParameterError("PeriodizedPotential: n must be >= 1");
  }
  const int d = params.dim();
  const double s = params.s();
  L_ = std::pow(static_cast<double>(n), 1.0 / d);
  scale_ = std::pow(L_, -s);
  if (K) {
    if (*K < 2) {
      throw ParameterError("PeriodizedPotential: truncation radius must be >= 2");
    }
    K_ = *K;
  } else {
    const int cap = max_truncation(d);
    K_ = 2;
    while (K_ < cap && unit_tail(d, s, K_) > rel_target) {
      K_ = K_ < 64 ? K_ + 1 : 2 * K_;
    }
    K_ = std::min(K_, cap);
  }
  tail_ = scale_ * unit_tail(d, s, K_);

  if (d > 1) {
    const int side = K_ + 1;
    std::size_t cells = 1;
    for (int i = 0; i < d; ++i) {
      cells *= side;
    }
    unit_means_.assign(cells, 0.0);
    std::vector<int> k(d, 0);
    std::map<std::vector<int>, double> by_sorted;
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rem = c;
      for (int i = 0; i < d; ++i) {
        k[i] = static_cast<int>(rem % side);
        rem /= side;
      }
      std::vector<int> sorted = k;
      std::sort(sorted.begin(), sorted.end());
      auto it = by_sorted.find(sorted);
      if (it == by_sorted.end()) {
        it = by_sorted.emplace(sorted, unit_cell_mean(s, sorted)).first;
      }
      unit_means_[c] = it->second;
    }
  }

  const std::vector<double> zero(d, 0.0);
  const Evaluation reg = evaluate_scaled(zero, false);
  const double c0 = d == 1 ? scale_ * unit_cell_mean_1d(s, 0) : scale_ * unit_means_[0];
  g_star_ = reg.value + c0;
  epsilon_ = 0.5 * (g_star_ - c0);
}

double PeriodizedPotential::cell_mean(std::span<const int> k) const {
  const int d = dim();
  if (static_cast<int>(k.size()) != d) {
    throw ParameterError("cell_mean: k has the wrong dimension");
  }
  if (d == 1) {
    return scale_ * unit_cell_mean_1d(params_.s(), std::abs(k[0]));
  }
  std::size_t idx = 0;
  for (int i = d - 1; i >= 0; --i) {
    const int a = std::abs(k[i]);
    if (a > K_) {
      throw ParameterError("cell_mean: |k| exceeds the truncation radius");
    }
    idx = idx * (K_ + 1) + a;
  }
  return scale_ * unit_means_[idx];
}

PeriodizedPotential::Evaluation PeriodizedPotential::evaluate_scaled(std::span<const double> t,
                                                                    bool include_origin) const {
  return dim() == 1 ? evaluate_1d(t[0], include_origin) : evaluate_nd(t, include_origin);
}

PeriodizedPotential::Evaluation PeriodizedPotential::evaluate_1d(double t, bool include_origin) const {
  const double s = params_.s();
  double sum = 0.0;
  double mag = 0.0;
  if (include_origin) {
    const double v = std::pow(std::abs(t), -s);
    sum += v;
    mag += v;
  }
  for (int k = 1; k <= K_; ++k) {
    const double v = std::pow(k + t, -s) + std::pow(k - t, -s);
    sum += v;
    mag += v;
  }
  // Σ_{k>K} (k ± t)^{-s} minus the matching cell means, resummed: the
  // analytic continuation of the Hurwitz zeta tail ζ(s, K+1 ± t).
  for (double a : {t, -t}) {
    const double z = K_ + 1 + a;
    const double zs = std::pow(z, -s);
    const double lead = -z * zs / (1.0 - s);
    double corr = 0.5 * zs;
    const double inv_z2 = 1.0 / (z * z);
    double zpow = zs / z;  // z^{-s-1}
    double rising = s;      // (s)_1
    for (int j = 1; j <= kEulerMaclaurinTerms; ++j) {
      corr += kBernoulliOverFactorial[j - 1] * rising * zpow;
      rising *= (s + 2 * j - 1) * (s + 2 * j);
      zpow *= inv_z2;
    }
    sum += lead + corr;
    mag += std::abs(lead) + std::abs(corr);
  }
  return {scale_ * sum, tail_ + scale_ * 8.0 * kEps * mag};
}

PeriodizedPotential::Evaluation PeriodizedPotential::evaluate_nd(std::span<const double> t,
                                                                 bool include_origin) const {
  const int d = dim();
  const double s = params_.s();
  std::vector<int> k(d, -K_);
  CompensatedSum acc;
  while (true) {
    double r2 = 0.0;
    std::size_t idx = 0;
    bool origin = true;
    for (int i = d - 1; i >= 0; --i) {
      const double y = t[i] + k[i];
      r2 += y * y;
      idx = idx * (K_ + 1) + std::abs(k[i]);
      origin = origin && k[i] == 0;
    }
    const double mean = unit_means_[idx];
    if (origin && !include_origin) {
      acc += -mean;
    } else {
      acc += std::pow(r2, -0.5 * s) - mean;
    }
    int i = 0;
    while (i < d && ++k[i] == K_ + 1) {
      k[i] = -K_;
      ++i;
    }
    if (i == d) {
      break;
    }
  }
  return {scale_ * acc.value(), tail_ + scale_ * 8.0 * kEps * acc.magnitude()};
}

PeriodizedPotential::Evaluation PeriodizedPotential::evaluate(std::span<const double> x) const {
  const int d = dim();
  if (static_cast<int>(x.size()) != d) {
    throw ParameterError("PeriodizedPotential: point has the wrong dimension");
  }
  std::array<double, 8> buf{};
  std::vector<double> heap;
  std::span<double> t;
  if (d <= 8) {
    t = std::span<double>(buf.data(), d);
  } else {
    heap.resize(d);
    t = heap;
  }
  bool at_origin = true;
  for (int i = 0; i < d; ++i) {
    t[i] = wrap_coordinate(x[i], L_) / L_;
    at_origin = at_origin && t[i] == 0.0;
  }
  if (at_origin) {
    return {kInfiniteEnergy, 0.0};
  }
  return evaluate_scaled(t, true);
}

double PeriodizedPotential::operator()(std::span<const double> x) const { return evaluate(x).value; }

double PeriodizedPotential::operator()(double x) const {
  const std::array<double, 1> xx{x};
  return evaluate(xx).value;
}

double PeriodizedPotential::regular_part(std::span<const double> x) const {
  const int d = dim();
  std::vector<double> t(d);
  for (int i = 0; i < d; ++i) {
    t[i] = wrap_coordinate(x[i], L_) / L_;
  }
  return evaluate_scaled(t, false).value;
}

}  // namespace riesz
