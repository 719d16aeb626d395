#include "riesz/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/summation.hpp"

namespace riesz {

namespace {

double pair_value(const PeriodizedPotential& pp, std::span<const double> x, std::span<const double> y) {
  const int d = pp.dim();
  std::array<double, 8> diff{};
  std::vector<double> heap;
  std::span<double> z;
  if (d <= 8) {
    z = std::span<double>(diff.data(), d);
  } else {
    heap.resize(d);
    z = heap;
  }
  for (int i = 0; i < d; ++i) {
    z[i] = x[i] - y[i];
  }
  return pp(z);  // the evaluator wraps
}

double row_energy(const Configuration& gamma, const PeriodizedPotential& pp, std::size_t i) {
  CompensatedSum acc;
  const auto xi = gamma.point(i);
  for (std::size_t j = i + 1; j < gamma.size(); ++j) {
    const double v = pair_value(pp, xi, gamma.point(j));
    if (is_infinite_energy(v)) {
      return kInfiniteEnergy;
    }
    acc += v;
  }
  return acc.value();
}

EnergyBreakdown reduce_rows(const std::vector<double>& rows, std::size_t npoints) {
  EnergyBreakdown out;
  out.pair_count = npoints < 2 ? 0 : npoints * (npoints - 1) / 2;
  CompensatedSum acc;
  for (double r : rows) {
    if (is_infinite_energy(r)) {
      out.singular = true;
      out.total = kInfiniteEnergy;
      return out;
    }
    acc += r;
  }
  out.total = acc.value();
  return out;
}

void check_box(const Configuration& gamma, const PeriodizedPotential& pp) {
  if (gamma.box().n() != pp.n() || gamma.dim() != pp.dim()) {
    throw ParameterError("configuration box does not match the periodized potential");
  }
}

double distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += (x[i] - y[i]) * (x[i] - y[i]);
  }
  return std::sqrt(acc);
}

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) {
    acc += v * v;
  }
  return std::sqrt(acc);
}

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace

EnergyBreakdown total_energy(const Configuration& gamma, const PeriodizedPotential& pp) {
  check_box(gamma, pp);
  const std::size_t n = gamma.size();
  std::vector<double> rows(n, 0.0);
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < nn; ++i) {
    rows[i] = row_energy(gamma, pp, static_cast<std::size_t>(i));
  }
  return reduce_rows(rows, n);
}

EnergyBreakdown total_energy_serial(const Configuration& gamma, const PeriodizedPotential& pp) {
  check_box(gamma, pp);
  const std::size_t n = gamma.size();
  std::vector<double> rows(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = row_energy(gamma, pp, i);
  }
  return reduce_rows(rows, n);
}

double pair_potential(const PeriodizedPotential& pp, std::span<const double> x, std::span<const double> y) {
  return pair_value(pp, x, y);
}

double delta_move(const Configuration& gamma, std::size_t i, std::span<const double> x_new,
                  const PeriodizedPotential& pp) {
  check_box(gamma, pp);
  const auto xi = gamma.point(i);
  if (std::equal(xi.begin(), xi.end(), x_new.begin())) {
    return 0.0;
  }
  CompensatedSum acc;
  bool old_singular = false;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    if (j == i) {
      continue;
    }
    const double vn = pair_value(pp, x_new, gamma.point(j));
    if (is_infinite_energy(vn)) {
      return kInfiniteEnergy;
    }
    const double vo = pair_value(pp, xi, gamma.point(j));
    if (is_infinite_energy(vo)) {
      old_singular = true;
      continue;
    }
    acc += vn - vo;
  }
  return old_singular ? -kInfiniteEnergy : acc.value();
}

double local_field(std::span<const double> x, const Configuration& gamma, const PeriodizedPotential& pp) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    const double v = pair_value(pp, x, gamma.point(j));
    if (is_infinite_energy(v)) {
      return kInfiniteEnergy;
    }
    acc += v;
  }
  return acc.value();
}

double local_energy_window(const Configuration& eta, const Configuration& gamma, const Window& delta,
                           const PeriodizedPotential& pp) {
  const EnergyBreakdown inner = total_energy_serial(eta, pp);
  if (inner.singular) {
    return kInfiniteEnergy;
  }
  CompensatedSum acc;
  acc += inner.total;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    const auto y = gamma.point(j);
    if (delta.contains(y)) {
      continue;
    }
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double v = pair_value(pp, eta.point(i), y);
      if (is_infinite_energy(v)) {
        return kInfiniteEnergy;
      }
      acc += v;
    }
  }
  return acc.value();
}

double move_tail_bound(const RieszParams& params, const Configuration& eta, const Configuration& gamma,
                       const Window& delta, int p, double kappa) {
  const int d = params.dim();
  const double s = params.s();
  if (p < 1) {
    throw ParameterError("move_tail_bound: p must be >= 1");
  }
  double rho = 0.0;
  {
    // sup_{x∈Δ} |x| is attained at a corner.
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      const double m = std::max(std::abs(delta.lower()[i]), std::abs(delta.upper()[i]));
      acc += m * m;
    }
    rho = std::sqrt(acc);
  }
  if (rho > 0.25 * std::pow(static_cast<double>(p), 1.0 / d)) {
    std::ostringstream msg;
    msg << "move_tail_bound: window radius " << rho << " exceeds p^{1/d}/4 for p = " << p;
    throw ParameterError(msg.str());
  }
  const std::size_t n_eta = count_in(eta, delta);
  if (n_eta == 0) {
    return 0.0;
  }
  const int P = gamma.box().n();
  const double a = (s + 1.0) / d;
  CompensatedSum shells;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    // y ∈ Λ_{k+1} ∖ Λ_k  ⇔  k <= (2|y|_∞)^d < k+1.
    const double vol = std::pow(2.0 * sup_norm(gamma.point(j)), d);
    const long long k = static_cast<long long>(std::floor(vol));
    if (k >= p && k < P) {
      shells += std::pow(static_cast<double>(k), -a);
    }
  }
  const double unobserved = kappa * (std::pow(static_cast<double>(P), -a) + std::pow(static_cast<double>(P), 1.0 - a) / (a - 1.0));
  return s * std::pow(4.0, s + 1.0) * rho * static_cast<double>(n_eta) * (shells.value() + unobserved);
}

MoveCost move_cost_truncated(const RieszParams& params, const Configuration& eta, const Configuration& gamma,
                             const Window& delta, int p, double kappa) {
  MoveCost out;
  out.truncation_radius = p;
  const Window lambda_p = Window::centered(params.dim(), p);
  CompensatedSum acc;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    const auto y = gamma.point(j);
    if (delta.contains(y) || !lambda_p.contains(y)) {
      continue;
    }
    const double gy = eval_riesz(params, norm(y));
    if (is_infinite_energy(gy)) {
      out.value = kInfiniteEnergy;
      return out;
    }
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const auto x = eta.point(i);
      if (!delta.contains(x)) {
        continue;
      }
      acc += eval_riesz(params, distance(x, y)) - gy;
    }
  }
  out.value = acc.value();
  out.certified_error = move_tail_bound(params, eta, gamma, delta, p, kappa);
  return out;
}

double backgrounded_energy(const RieszParams& params, const Configuration& gamma) {
  if (params.dim() != 1) {
    throw ParameterError("backgrounded_energy is implemented for d = 1 only");
  }
  const double s = params.s();
  const double m = gamma.box().side_length();
  const double a = -0.5 * m;
  const double b = 0.5 * m;
  CompensatedSum acc;
  const std::size_t N = gamma.size();
  for (std::size_t i = 0; i < N; ++i) {
    const double xi = gamma.point(i)[0];
    for (std::size_t j = i + 1; j < N; ++j) {
      const double v = eval_riesz(params, xi - gamma.point(j)[0]);
      if (is_infinite_energy(v)) {
        return kInfiniteEnergy;
      }
      acc += v;
    }
    acc += -(std::pow(xi - a, 1.0 - s) + std::pow(b - xi, 1.0 - s)) / (1.0 - s);
  }
  acc += std::pow(m, 2.0 - s) / ((1.0 - s) * (2.0 - s));
  return acc.value();
}

double replicated_mean_energy(const RieszParams& params, const Configuration& gamma, int k) {
  if (params.dim() != 1) {
    throw ParameterError("replicated_mean_energy is implemented for d = 1 only");
  }
  const int n = gamma.box().n();
  if (static_cast<int>(gamma.size()) != n) {
    std::ostringstream msg;
    msg << "replicated_mean_energy: charge balance |gamma| = n violated (" << gamma.size() << " != " << n << ")";
    throw BalanceError(msg.str());
  }
  if (k < 0) {
    throw ParameterError("replicated_mean_energy: k must be >= 0");
  }
  const int copies = 2 * k + 1;
  const double L = gamma.box().side_length();
  Configuration big(TorusBox(copies * n, 1));
  for (int j = -k; j <= k; ++j) {
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const double x = gamma.point(i)[0] + j * L;
      big.append_unchecked(std::span<const double>(&x, 1));
    }
  }
  return backgrounded_energy(params, big) / copies;
}

}  // namespace riesz
