#pragma once

#include <cstddef>
#include <span>

#include "riesz/params.hpp"
#include "riesz/potential.hpp"
#include "riesz/torus.hpp"

namespace riesz {

struct EnergyBreakdown {
  double total = 0.0;  ///< +infinity sentinel when singular
  std::size_t pair_count = 0;
  bool singular = false;
};

/// H_n(γ) = Σ_{pairs} g_n(x - y). OpenMP over rows, fixed-order reduction.
EnergyBreakdown total_energy(const Configuration& gamma, const PeriodizedPotential& pp);
/// Serial reference of total_energy; bitwise identical result.
EnergyBreakdown total_energy_serial(const Configuration& gamma, const PeriodizedPotential& pp);

/// g_n(x - y) for two points of the same torus.
double pair_potential(const PeriodizedPotential& pp, std::span<const double> x, std::span<const double> y);

/// H_n(γ with point i moved to x_new) - H_n(γ).
double delta_move(const Configuration& gamma, std::size_t i, std::span<const double> x_new,
                  const PeriodizedPotential& pp);

/// h_n(x, γ) = Σ_{y∈γ} g_n(x - y); +infinity if x ∈ γ.
double local_field(std::span<const double> x, const Configuration& gamma, const PeriodizedPotential& pp);

/// H_{n,Δ}(η, γ) = H_n(η) + Σ_{x∈η} Σ_{y∈γ, y∉Δ} g_n(x - y).
double local_energy_window(const Configuration& eta, const Configuration& gamma, const Window& delta,
                           const PeriodizedPotential& pp);

struct MoveCost {
  double value = 0.0;
  int truncation_radius = 0;     ///< p
  double certified_error = 0.0;  ///< move_tail_bound for this configuration
};

/// Free-space move function M_Δ^{(p)}(η, γ) = Σ_{x∈η_Δ} Σ_{y∈γ_{Λ_p∖Δ}} [g(x-y) - g(y)].
/// Coordinates are used as points of R^d (no wrapping); γ is known on its
/// box Λ_P and unobserved shells beyond P are bounded through `kappa`.
MoveCost move_cost_truncated(const RieszParams& params, const Configuration& eta, const Configuration& gamma,
                             const Window& delta, int p, double kappa = 2.0);

/// s 4^{s+1} ρ_Δ N_Δ(η) [Σ_{k=p}^{P-1} N_{Λ_{k+1}∖Λ_k}(γ) k^{-(s+1)/d} + κ Σ_{k>=P} k^{-(s+1)/d}],
/// with ρ_Δ = sup_{x∈Δ} |x|. Requires ρ_Δ <= p^{1/d}/4.
double move_tail_bound(const RieszParams& params, const Configuration& eta, const Configuration& gamma,
                       const Window& delta, int p, double kappa = 2.0);

/// Jellium energy of γ ⊂ Λ_m (m = box volume) against the uniform background,
/// d = 1: Σ_{pairs} g - Σ_x ∫_{Λ_m} g(x-y)dy + (1/2)∬_{Λ_m^2} g.
double backgrounded_energy(const RieszParams& params, const Configuration& gamma);

/// backgrounded_energy of the (2k+1)-fold periodic replication of γ, divided
/// by 2k+1. Requires d = 1 and |γ| = n.
double replicated_mean_energy(const RieszParams& params, const Configuration& gamma, int k);

}  // namespace riesz
