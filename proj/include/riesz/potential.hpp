#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riesz/params.hpp"
#include "riesz/quadrature.hpp"

namespace riesz {

/// g(x) = |x|^{-s}; +infinity sentinel at x = 0.
double eval_riesz(const RieszParams& params, std::span<const double> x);
double eval_riesz(const RieszParams& params, double r);

struct RieszSplit {
  double g1 = 0.0;  ///< (1 + |x|^2)^{-s/2}, bounded and of positive type
  double g2 = 0.0;  ///< |x|^{-s} - g1, nonnegative, integrable
};

/// Stabilizing split of g. Throws SingularityError at x = 0.
RieszSplit riesz_split(const RieszParams& params, std::span<const double> x);
RieszSplit riesz_split(const RieszParams& params, double r);

/// ∫_{R^d} g2 by adaptive Gauss–Kronrod on the radial integral. The returned
/// error is the integrator's estimate, always <= tol.
QuadratureResult integrate_g2(const RieszParams& params, double tol = 1e-8);

/// Closed form of ∫ g2: -(|S^{d-1}|/2) Γ(d/2) Γ((s-d)/2) / Γ(s/2).
double integrate_g2_closed_form(const RieszParams& params);

/// (1/n) ∫_{Λ_n} g(y + k n^{1/d}) dy. Exact antiderivative in d = 1, tensor
/// Gauss quadrature (pyramid split at k = 0) for d >= 2.
double cell_mean(const RieszParams& params, int n, std::span<const int> k);
double cell_mean(const RieszParams& params, int n, int k);

/// Certified bound on the neglected remainder of the evaluator truncated at
/// shell K, uniform over the fundamental domain.
double tail_bound(const RieszParams& params, int n, int K);

/// Bound on the remainder of the plain symmetric sum over |k|_∞ <= K (no
/// end correction); second order because ±k images are summed together.
double paired_tail_bound(const RieszParams& params, int n, int K);

struct SelfConstant {
  double g_star = 0.0;     ///< Σ_{u≠0} [g(n^{1/d} u) - c_u]
  double epsilon_n = 0.0;  ///< (g_star - c_0) / 2, the per-point self energy
  double tolerance = 0.0;
};

SelfConstant self_constant(const RieszParams& params, int n);

/// Periodized Riesz potential g_n on Λ_n = [-L/2, L/2)^d, L = n^{1/d}:
///   g_n(x) = Σ_k [g(x + kL) - c_k].
/// In d = 1 the images beyond K are resummed by Euler–Maclaurin (Hurwitz
/// zeta tail), so K stays small. For d >= 2 the symmetric shell sum is used
/// as is and K is capped for cost; tail_bound() reports the honest bound.
/// Immutable after construction.
class PeriodizedPotential {
 public:
  struct Evaluation {
    double value = 0.0;
    double error = 0.0;  ///< tail bound plus a rounding bound
  };

  PeriodizedPotential(const RieszParams& params, int n, std::optional<int> K = {}, double rel_target = 1e-9);

  const RieszParams& params() const { return params_; }
  int dim() const { return params_.dim(); }
  int n() const { return n_; }
  double side_length() const { return L_; }
  int truncation_radius() const { return K_; }
  double tail_bound() const { return tail_; }
  double self_constant() const { return g_star_; }
  double epsilon() const { return epsilon_; }
  /// c_k from the precomputed table (|k|_∞ <= K).
  double cell_mean(std::span<const int> k) const;

  /// g_n(x); x is wrapped internally. Returns the +infinity sentinel when x
  /// is a lattice point.
  double operator()(std::span<const double> x) const;
  double operator()(double x) const;
  Evaluation evaluate(std::span<const double> x) const;

  /// g_n(x) - g(x) for the wrapped x; finite (analytic) at x = 0.
  double regular_part(std::span<const double> x) const;

 private:
  Evaluation evaluate_scaled(std::span<const double> t, bool include_origin) const;
  Evaluation evaluate_1d(double t, bool include_origin) const;
  Evaluation evaluate_nd(std::span<const double> t, bool include_origin) const;

  RieszParams params_;
  int n_;
  double L_;
  double scale_;  ///< L^{-s}
  int K_;
  double tail_;
  double g_star_;
  double epsilon_;
  /// Cell means for n = 1 on the nonnegative orthant, indexed by |k_i|.
  std::vector<double> unit_means_;
};

}  // namespace riesz
