#include "riesz/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/summation.hpp"
#include "riesz/wrap.hpp"

namespace riesz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

enum class Domain { whole, inside, outside };

// Reference rule on [0, 1] with graded panels at both ends.
Rule1D arc_rule(const QuadratureSpec& spec) {
  if (spec.panels < 1 || spec.order < 1 || spec.grading < 0) {
    throw ParameterError("QuadratureSpec: panels, order >= 1 and grading >= 0 required");
  }
  std::vector<double> edges;
  const double first = 1.0 / spec.panels;
  edges.push_back(0.0);
  for (int g = spec.grading; g >= 1; --g) {
    edges.push_back(first * std::pow(4.0, -g));
  }
  for (int p = 1; p < spec.panels; ++p) {
    edges.push_back(static_cast<double>(p) / spec.panels);
  }
  for (int g = 1; g <= spec.grading; ++g) {
    edges.push_back(1.0 - first * std::pow(4.0, -g));
  }
  edges.push_back(1.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return composite_gauss(edges, spec.order);
}

// Iterated quadrature over ordered point tuples on the circle [-L/2, L/2).
// Coordinates are integrated in order; every level cuts the circle at the
// cut points and at all points placed so far (fixed ones included), and
// keeps the arcs matching its domain. The leaf receives all points and the
// energy of the placed points (pairs among fixed points excluded), and
// returns an M-vector that is integrated with the product weights.
template <int M>
class Iterated {
 public:
  using Value = std::array<double, M>;
  using Leaf = std::function<Value(std::span<const double>, double)>;

  Iterated(const PeriodizedPotential& pp, const QuadratureSpec& spec, std::vector<double> cuts,
           std::optional<Window> window)
      : pp_(pp), rule_(arc_rule(spec)), window_(std::move(window)), L_(pp.side_length()) {
    if (window_) {
      cuts.push_back(window_->lower()[0]);
      cuts.push_back(window_->upper()[0]);
    }
    for (double& c : cuts) {
      c = wrap_coordinate(c, L_);
    }
    cuts_ = std::move(cuts);
  }

  Value integrate(std::span<const Domain> domains, std::span<const double> fixed, const Leaf& leaf,
                  bool parallel) const {
    std::vector<double> pts(fixed.begin(), fixed.end());
    if (domains.empty()) {
      return leaf(pts, 0.0);
    }
    const std::vector<std::pair<double, double>> nodes = level_nodes(domains[0], pts);
    std::vector<Value> partial(nodes.size());
    const long long count = static_cast<long long>(nodes.size());
    auto body = [&](long long i) {
      std::vector<double> local = pts;
      const double x = nodes[i].first;
      const double e = new_energy(x, local);
      local.push_back(x);
      Value v{};
      if (!is_infinite_energy(e)) {
        v = recurse(domains, 1, local, e, leaf);
      }
      for (int m = 0; m < M; ++m) {
        partial[i][m] = nodes[i].second * v[m];
      }
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (long long i = 0; i < count; ++i) {
        body(i);
      }
    } else {
      for (long long i = 0; i < count; ++i) {
        body(i);
      }
    }
    std::array<CompensatedSum, M> acc;
    for (const Value& v : partial) {
      for (int m = 0; m < M; ++m) {
        acc[m] += v[m];
      }
    }
    Value out{};
    for (int m = 0; m < M; ++m) {
      out[m] = acc[m].value();
    }
    return out;
  }

 private:
  double new_energy(double x, std::span<const double> pts) const {
    double e = 0.0;
    for (double p : pts) {
      const double v = pp_(x - p);
      if (is_infinite_energy(v)) {
        return kInfiniteEnergy;
      }
      e += v;
    }
    return e;
  }

  Value recurse(std::span<const Domain> domains, std::size_t level, std::vector<double>& pts, double energy,
                const Leaf& leaf) const {
    if (level == domains.size()) {
      return leaf(pts, energy);
    }
    const std::vector<std::pair<double, double>> nodes = level_nodes(domains[level], pts);
    std::array<CompensatedSum, M> acc;
    for (const auto& [x, w] : nodes) {
      const double e = new_energy(x, pts);
      if (is_infinite_energy(e)) {
        continue;
      }
      pts.push_back(x);
      const Value v = recurse(domains, level + 1, pts, energy + e, leaf);
      pts.pop_back();
      for (int m = 0; m < M; ++m) {
        acc[m] += w * v[m];
      }
    }
    Value out{};
    for (int m = 0; m < M; ++m) {
      out[m] = acc[m].value();
    }
    return out;
  }

  std::vector<std::pair<double, double>> level_nodes(Domain domain, std::span<const double> pts) const {
    std::vector<double> breaks(cuts_);
    for (double p : pts) {
      breaks.push_back(wrap_coordinate(p, L_));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<std::pair<double, double>> arcs;
    if (breaks.empty()) {
      arcs.emplace_back(-0.5 * L_, 0.5 * L_);
    } else {
      for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        arcs.emplace_back(breaks[i], breaks[i + 1]);
      }
      arcs.emplace_back(breaks.back(), breaks.front() + L_);
    }
    std::vector<std::pair<double, double>> nodes;
    for (const auto& [a, b] : arcs) {
      const double h = b - a;
      if (!(h > 0.0)) {
        continue;
      }
      if (domain != Domain::whole) {
        const double mid = wrap_coordinate(0.5 * (a + b), L_);
        const bool in = window_->contains(std::span<const double>(&mid, 1));
        if (in != (domain == Domain::inside)) {
          continue;
        }
      }
      for (std::size_t q = 0; q < rule_.size(); ++q) {
        nodes.emplace_back(wrap_coordinate(a + h * rule_.nodes[q], L_), h * rule_.weights[q]);
      }
    }
    return nodes;
  }

  const PeriodizedPotential& pp_;
  Rule1D rule_;
  std::optional<Window> window_;
  double L_;
  std::vector<double> cuts_;
};

void require_oracle_range(const RieszParams& params, int n, int n_max, const char* what) {
  if (params.dim() != 1) {
    throw ParameterError(std::string(what) + ": quadrature oracles are implemented for d = 1");
  }
  if (n < 1 || n > n_max) {
    std::ostringstream msg;
    msg << what << ": n must lie in [1, " << n_max << "], got " << n;
    throw ParameterError(msg.str());
  }
}

double boltzmann(double beta, double energy) { return beta == 0.0 ? 1.0 : std::exp(-beta * energy); }

double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

double partition_at(const PeriodizedPotential& pp, int n, double beta, const QuadratureSpec& spec) {
  const Iterated<1> integ(pp, spec, {}, std::nullopt);
  const std::vector<Domain> domains(n - 1, Domain::whole);
  const double zero = 0.0;
  const auto v = integ.integrate(
      domains, std::span<const double>(&zero, 1),
      [beta](std::span<const double>, double e) { return std::array<double, 1>{boltzmann(beta, e)}; }, true);
  return v[0] / std::pow(static_cast<double>(n), n - 1);
}

double expectation_at(const PeriodizedPotential& pp, const ConfigFunctional& f, int n, double beta,
                      const QuadratureSpec& spec, std::span<const double> cuts) {
  const Iterated<2> integ(pp, spec, std::vector<double>(cuts.begin(), cuts.end()), std::nullopt);
  const std::vector<Domain> domains(n, Domain::whole);
  const auto v = integ.integrate(
      domains, {},
      [&](std::span<const double> pts, double e) {
        const double w = boltzmann(beta, e);
        return std::array<double, 2>{w * f(pts, e), w};
      },
      true);
  return v[0] / v[1];
}

double dlr_at(const PeriodizedPotential& pp, int n, double beta, const Window& delta, const ConfigFunctional& f,
              const QuadratureSpec& outer, const QuadratureSpec& inner, std::span<const double> cuts) {
  const std::vector<double> cut_list(cuts.begin(), cuts.end());
  const Iterated<2> outer_eta(pp, outer, cut_list, delta);
  const Iterated<2> inner_eta(pp, inner, cut_list, delta);
  const Iterated<3> outer_xi(pp, outer, cut_list, delta);
  CompensatedSum direct;
  CompensatedSum decomposed;
  CompensatedSum z;
  for (int k = 0; k <= n; ++k) {
    const std::vector<Domain> xi_domains(n - k, Domain::outside);
    const std::vector<Domain> eta_domains(k, Domain::inside);
    // η-integrals of (f e^{-βH_{n,Δ}}, e^{-βH_{n,Δ}}) given the exterior ξ.
    auto eta_leaf = [&](std::span<const double> pts, double e) {
      const double w = boltzmann(beta, e);
      return std::array<double, 2>{w * f(pts, e), w};
    };
    auto xi_leaf = [&](std::span<const double> xi, double e_xi) {
      const double w_xi = boltzmann(beta, e_xi);
      if (k == 0) {
        const double fx = f(xi, e_xi);
        return std::array<double, 3>{w_xi * fx, w_xi * fx, w_xi};
      }
      const auto a = outer_eta.integrate(eta_domains, xi, eta_leaf, false);
      const auto b = inner_eta.integrate(eta_domains, xi, eta_leaf, false);
      const double kernel_mean = b[1] > 0.0 ? b[0] / b[1] : 0.0;
      return std::array<double, 3>{w_xi * a[0], w_xi * a[1] * kernel_mean, w_xi * a[1]};
    };
    // eta_leaf sees only η-energy plus η-ξ cross terms: that is H_{n,Δ}(η, ξ).
    const auto v = outer_xi.integrate(xi_domains, {}, xi_leaf, true);
    const double c = binomial_coefficient(n, k);
    direct += c * v[0];
    decomposed += c * v[1];
    z += c * v[2];
  }
  return (direct.value() - decomposed.value()) / z.value();
}

double gnz_side(const PeriodizedPotential& pp, int n, double beta, const PointFunctional& f,
                const QuadratureSpec& spec, std::span<const double> cuts, bool left) {
  const Iterated<2> integ(pp, spec, std::vector<double>(cuts.begin(), cuts.end()), std::nullopt);
  const std::vector<Domain> domains(n, Domain::whole);
  const auto v = integ.integrate(
      domains, {},
      [&](std::span<const double> pts, double e) {
        const double w = boltzmann(beta, e);
        std::vector<double> others(pts.size() - 1);
        double acc = 0.0;
        const std::size_t terms = left ? pts.size() : 1;
        for (std::size_t i = 0; i < terms; ++i) {
          std::size_t c = 0;
          for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != i) {
              others[c++] = pts[j];
            }
          }
          acc += f(pts[i], others);
        }
        return std::array<double, 2>{w * acc, w};
      },
      true);
  // Right side: (1/Z)(1/n^{n-1}) ∫∫ f e^{-βH}, Z = (1/n^n) ∫ e^{-βH}.
  return left ? v[0] / v[1] : n * v[0] / v[1];
}

OracleResult reference_impl(const RieszParams& params, int n, double x, long long K_big, bool parallel) {
  if (params.dim() != 1) {
    throw ParameterError("reference_periodized: d = 1 only");
  }
  if (K_big < 2) {
    throw ParameterError("reference_periodized: K_big must be >= 2");
  }
  const double s = params.s();
  const double L = static_cast<double>(n);
  const double t = wrap_coordinate(x, L) / L;
  if (t == 0.0) {
    return {kInfiniteEnergy, 0.0};
  }
  constexpr long long kBlocks = 64;
  std::vector<CompensatedSum> parts(kBlocks);
  const long long per = (K_big + kBlocks - 1) / kBlocks;
  auto block = [&](long long b) {
    const long long lo = 1 + b * per;
    const long long hi = std::min(K_big, lo + per - 1);
    CompensatedSum acc;
    for (long long k = lo; k <= hi; ++k) {
      const double kd = static_cast<double>(k);
      acc += std::pow(kd + t, -s);
      acc += std::pow(kd - t, -s);
    }
    parts[b] = acc;
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < kBlocks; ++b) {
      block(b);
    }
  } else {
    for (long long b = 0; b < kBlocks; ++b) {
      block(b);
    }
  }
  // The cell means telescope: Σ_{|k|<=K} c_k = 2 (K+1/2)^{1-s} / (1-s).
  CompensatedSum total;
  total += std::pow(std::abs(t), -s);
  for (const CompensatedSum& p : parts) {
    total += p;
  }
  total += -2.0 * std::pow(static_cast<double>(K_big) + 0.5, 1.0 - s) / (1.0 - s);
  const double scale = std::pow(L, -s);
  // Each paired term is a difference of O(k^{-s}) operands: its rounding
  // error is a few ulps of 4k^{-s}; Σ_{k<=K} 4k^{-s} <= 4 K^{1-s}/(1-s) + 4.
  const double operand_mass = 4.0 * std::pow(static_cast<double>(K_big), 1.0 - s) / (1.0 - s) + 4.0 +
                              std::pow(std::abs(t), -s) + std::pow(2.0, s) / (1.0 - s);
  const double rounding = 8.0 * kEps * operand_mass * scale;
  return {scale * total.value(), paired_tail_bound(params, n, static_cast<int>(std::min<long long>(K_big, 1LL << 30))) + rounding};
}

}  // namespace

OracleResult exact_partition(const RieszParams& params, int n, double beta, const QuadratureSpec& spec) {
  require_oracle_range(params, n, 4, "exact_partition");
  if (n == 1) {
    return {1.0, 0.0};
  }
  const PeriodizedPotential pp(params, n);
  const double coarse = partition_at(pp, n, beta, spec);
  const double fine = partition_at(pp, n, beta, spec.doubled());
  return {fine, std::abs(fine - coarse)};
}

OracleResult exact_expectation(const ConfigFunctional& f, const RieszParams& params, int n, double beta,
                               const QuadratureSpec& spec, std::span<const double> cuts) {
  require_oracle_range(params, n, 3, "exact_expectation");
  const PeriodizedPotential pp(params, n);
  const double coarse = expectation_at(pp, f, n, beta, spec, cuts);
  const double fine = expectation_at(pp, f, n, beta, spec.doubled(), cuts);
  return {fine, std::abs(fine - coarse)};
}

OracleResult dlr_residual(const RieszParams& params, int n, double beta, const Window& delta,
                          const ConfigFunctional& f, const QuadratureSpec& outer, const QuadratureSpec& inner,
                          std::span<const double> cuts) {
  require_oracle_range(params, n, 3, "dlr_residual");
  const PeriodizedPotential pp(params, n);
  if (!delta.inside(TorusBox(n, 1))) {
    throw ParameterError("dlr_residual: window must lie in the fundamental domain");
  }
  const double coarse = dlr_at(pp, n, beta, delta, f, outer, inner, cuts);
  const double fine = dlr_at(pp, n, beta, delta, f, outer.doubled(), inner.doubled(), cuts);
  return {coarse, std::abs(fine - coarse)};
}

OracleResult gnz_residual(const RieszParams& params, int n, double beta, const PointFunctional& f,
                          const QuadratureSpec& lhs, const QuadratureSpec& rhs, std::span<const double> cuts) {
  require_oracle_range(params, n, 3, "gnz_residual");
  const PeriodizedPotential pp(params, n);
  const double coarse = gnz_side(pp, n, beta, f, lhs, cuts, true) - gnz_side(pp, n, beta, f, rhs, cuts, false);
  const double fine = gnz_side(pp, n, beta, f, lhs.doubled(), cuts, true) -
                      gnz_side(pp, n, beta, f, rhs.doubled(), cuts, false);
  return {coarse, std::abs(fine - coarse)};
}

OracleResult reference_periodized(const RieszParams& params, int n, double x, long long K_big) {
  return reference_impl(params, n, x, K_big, true);
}

OracleResult reference_periodized_serial(const RieszParams& params, int n, double x, long long K_big) {
  return reference_impl(params, n, x, K_big, false);
}

std::vector<double> pair_distance_probabilities(const RieszParams& params, double beta, int bins) {
  if (params.dim() != 1 || bins < 1) {
    throw ParameterError("pair_distance_probabilities: d = 1 and bins >= 1 required");
  }
  const PeriodizedPotential pp(params, 2);
  const double half = 0.5 * pp.side_length();
  std::vector<double> p(bins);
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = half * b / bins;
    const double hi = half * (b + 1) / bins;
    p[b] = adaptive_integrate(
               [&](double r) {
                 if (r == 0.0) {
                   return beta > 0.0 ? 0.0 : 1.0;
                 }
                 return boltzmann(beta, pp(r));
               },
               lo, hi, 1e-10)
               .value;
    total += p[b];
  }
  for (double& v : p) {
    v /= total;
  }
  return p;
}

double configuration_integral(const PeriodizedPotential& pp, int npts, double beta, const QuadratureSpec& spec) {
  const Iterated<1> integ(pp, spec, {}, std::nullopt);
  const std::vector<Domain> domains(npts, Domain::whole);
  return integ
      .integrate(domains, {},
                 [beta](std::span<const double>, double e) { return std::array<double, 1>{boltzmann(beta, e)}; },
                 true)[0];
}

double configuration_integral_serial(const PeriodizedPotential& pp, int npts, double beta,
                                     const QuadratureSpec& spec) {
  const Iterated<1> integ(pp, spec, {}, std::nullopt);
  const std::vector<Domain> domains(npts, Domain::whole);
  return integ
      .integrate(domains, {},
                 [beta](std::span<const double>, double e) { return std::array<double, 1>{boltzmann(beta, e)}; },
                 false)[0];
}

OracleResult periodized_cell_integral(const PeriodizedPotential& pp) {
  if (pp.dim() != 1) {
    throw ParameterError("periodized_cell_integral: d = 1 only");
  }
  const double s = pp.params().s();
  const double half = 0.5 * pp.side_length();
  auto reg = [&](double x) {
    const std::array<double, 1> p{x};
    return pp.regular_part(p);
  };
  // Split at 0: g_n - g is smooth but only C^∞ away from the image points ±L.
  const QuadratureResult left = adaptive_integrate(reg, -half, 0.0, 1e-12);
  const QuadratureResult right = adaptive_integrate(reg, 0.0, half, 1e-12);
  const double singular = 2.0 * std::pow(half, 1.0 - s) / (1.0 - s);
  const double value = left.value + right.value + singular;
  const double rounding = 16.0 * kEps * (std::abs(left.value) + std::abs(right.value) + singular);
  return {value, left.error + right.error + rounding};
}

}  // namespace riesz
