#pragma once

#include <functional>
#include <span>
#include <vector>

#include "riesz/params.hpp"
#include "riesz/potential.hpp"
#include "riesz/torus.hpp"

namespace riesz {

/// Iterated composite Gauss–Legendre rule on the circle Λ_n (d = 1). Every
/// coordinate is integrated arc by arc between the already placed points and
/// the user cut points; each arc gets `panels` equal panels plus `grading`
/// levels of factor-4 refinement at both ends, `order` nodes per panel.
struct QuadratureSpec {
  int panels = 1;
  int order = 8;
  int grading = 2;

  QuadratureSpec doubled() const { return {2 * panels, order, grading}; }
  /// Nodes on an arc with no interior cut.
  int points_per_arc() const { return (panels + 2 * grading) * order; }
};

struct OracleResult {
  double value = 0.0;
  double tolerance = 0.0;  ///< from resolution or truncation doubling
};

/// f(points, H_n(points)) for an ordered configuration of a 1D torus.
using ConfigFunctional = std::function<double(std::span<const double> points, double energy)>;

/// Z^β_n = ∫ e^{-βH_n} dBin_{Λ_n,n}, d = 1, n <= 4. Uses translation
/// invariance to fix the first point at 0. Tolerance from resolution doubling.
OracleResult exact_partition(const RieszParams& params, int n, double beta, const QuadratureSpec& spec = {});

/// E_{P^β_n}[f] for n <= 3, d = 1. `cuts` lists discontinuities of f.
OracleResult exact_expectation(const ConfigFunctional& f, const RieszParams& params, int n, double beta,
                               const QuadratureSpec& spec = {}, std::span<const double> cuts = {});

/// E[f] - E[f_{n,Δ}], f_{n,Δ}(γ) = ∫ f(η ∪ γ_{Δ^c}) e^{-βH_{n,Δ}(η,γ)} dBin_{Δ,N_Δ(γ)}(η) / normalizer.
/// Both sides share the outer grid; f_{n,Δ} uses an independent inner grid
/// (`inner`), so the residual measures genuine quadrature error. d = 1, n <= 3.
OracleResult dlr_residual(const RieszParams& params, int n, double beta, const Window& delta,
                          const ConfigFunctional& f, const QuadratureSpec& outer = {},
                          const QuadratureSpec& inner = {2, 8, 2}, std::span<const double> cuts = {});

/// f(x, rest) for the GNZ identity.
using PointFunctional = std::function<double(double x, std::span<const double> rest)>;

/// E[Σ_{x∈γ} f(x, γ∖x)] - (1/Z) ∫∫ f(x,γ) e^{-βH_n(γ∪x)} dBin_{n-1}(γ) dx, left side on
/// `lhs`, right side (including its own Z) on `rhs`. d = 1, n <= 3.
OracleResult gnz_residual(const RieszParams& params, int n, double beta, const PointFunctional& f,
                          const QuadratureSpec& lhs = {}, const QuadratureSpec& rhs = {2, 8, 2},
                          std::span<const double> cuts = {});

/// Plain paired lattice sum Σ_{|k|<=K} [g(x+kL) - c_k] with closed-form cell
/// means and compensated accumulation, d = 1. Tolerance = second-order
/// truncation bound + rounding bound.
OracleResult reference_periodized(const RieszParams& params, int n, double x, long long K_big);
/// Serial twin of reference_periodized (the default splits k-blocks over OpenMP).
OracleResult reference_periodized_serial(const RieszParams& params, int n, double x, long long K_big);

/// Law of the torus distance r ∈ [0, L/2] between the two points of P^β_2
/// (d = 1): probabilities of `bins` equal bins, density ∝ e^{-β g_2(r)}.
std::vector<double> pair_distance_probabilities(const RieszParams& params, double beta, int bins);

/// ∫_{Λ_n} g_n(x) dx (d = 1) as ∫(g_n - g) by adaptive Gauss–Kronrod plus the
/// closed-form ∫_{Λ_n} |x|^{-s}. Should vanish up to n·tail_bound.
OracleResult periodized_cell_integral(const PeriodizedPotential& pp);

/// Iterated integral engine, exposed for the benchmark: ∫_{Λ_n^n} e^{-βH_n} dx
/// with OpenMP over first-level nodes, and its serial twin.
double configuration_integral(const PeriodizedPotential& pp, int npts, double beta, const QuadratureSpec& spec);
double configuration_integral_serial(const PeriodizedPotential& pp, int npts, double beta,
                                     const QuadratureSpec& spec);

}  // namespace riesz
