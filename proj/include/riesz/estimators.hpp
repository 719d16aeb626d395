#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riesz/params.hpp"
#include "riesz/potential.hpp"
#include "riesz/sampler.hpp"
#include "riesz/stats.hpp"
#include "riesz/torus.hpp"

namespace riesz {

struct RunMetadata {
  int d = 1;
  double s = 0.0;
  int n = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::string schedule = "plain";
};

struct EstimateReport {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  RunMetadata metadata;
  bool inconclusive = false;
  /// Additional named quantities (window size, reference value, CI, ...).
  std::map<std::string, double> extra;
};

/// Runs `state` and returns every emitted configuration, optionally
/// stationarized by an independent uniform torus translation.
std::vector<Configuration> collect_samples(ChainState& state, const ChainOptions& options, bool stationarized,
                                           Rng& translation_rng, ChainDiagnostics* diagnostics = nullptr);

/// Mean count per unit volume in each of `cells` equal slabs along the first axis.
std::vector<EstimateReport> intensity_profile(std::span<const Configuration> samples, int cells,
                                              const RunMetadata& meta = {});

/// For each k: E|N_{Λ_k} - k| and E[(N_{Λ_k} - k)^2] (the variance for
/// intensity-one stationary samples), plus a log-log slope of the latter
/// against k with a 95% interval (extra "slope", "ci_low", "ci_high").
std::vector<EstimateReport> number_fluctuation(std::span<const Configuration> samples, std::span<const double> ks,
                                               const RunMetadata& meta = {});

/// Frequencies of N_Δ = k for k = 0..k_max from a count series; the last
/// report ("overflow") collects k > k_max so frequencies sum to one. Bins
/// with zero hits are flagged inconclusive when the series is shorter than
/// `min_samples`.
std::vector<EstimateReport> conditional_number_histogram(std::span<const std::size_t> counts, std::size_t k_max,
                                                         std::size_t min_samples = 100000,
                                                         const RunMetadata& meta = {});

/// E|h_n(0, γ)|; samples with a point within 1e-12 of the origin are counted
/// in extra["guarded"] and skipped.
EstimateReport local_field_moment(std::span<const Configuration> samples, const PeriodizedPotential& pp,
                                  const RunMetadata& meta = {});

/// Joint count series (N_Δ, N_{Δ+u}) for one shift u.
using JointCounts = std::vector<std::pair<std::size_t, std::size_t>>;

/// r(u) = P(N_Δ=k, N_{Δ+u}=l) / P(N_Δ=l, N_{Δ+u}=k) per shift, and a final
/// "factor" report max_u r / min_u r. Inconclusive when a count is below
/// `min_hits`.
std::vector<EstimateReport> swap_ratio_probe(std::span<const JointCounts> per_shift, std::size_t k, std::size_t l,
                                             std::size_t min_hits = 100, const RunMetadata& meta = {});

/// S_p(x, γ) = Σ_{y∈γ∩Λ_p} g(x - y) - ∫_{Λ_p} g(x - y) dy, d = 1. Per p: mean
/// (value) and variance (extra); increments E|S_{2p} - S_p| in extra
/// "increment_next" when 2p is also listed.
std::vector<EstimateReport> compensator_probe(std::span<const Configuration> samples, const RieszParams& params,
                                              double x, std::span<const int> p_list, const RunMetadata& meta = {});

/// max_{γ∈C_{δ,n}} H_n(γ)/n in d = 1. g_n is convex on (0, L), so the
/// maximum of each pair term over its distance interval sits at an endpoint.
double perturbed_lattice_energy_constant(const PeriodizedPotential& pp, double delta);

struct PartitionBounds {
  double log_lower = 0.0;  ///< -β c_n + log(n!(δ/n)^n)/n
  double log_upper = 0.0;  ///< -β A, A = -(1/2 + ∫g2) - ε_n
  double stability_constant = 0.0;  ///< A
  double lattice_constant = 0.0;    ///< c_n
};

/// Per-volume bounds on log Z^β_n / n (d = 1).
PartitionBounds partition_bounds(const RieszParams& params, int n, double beta, double delta = 0.25);

struct FreeEnergyOptions {
  int grid_points = 21;
  std::uint64_t steps = 200000;
  std::uint64_t burn_in = 20000;
  std::uint64_t thin = 10;
  std::uint64_t seed = 1;
};

/// log Z_n / n for each n: exact quadrature for n <= 4, otherwise
/// thermodynamic integration -∫_0^β E_{β'}[H_n]/n dβ' (trapezoid on
/// `grid_points` nodes; extra["coarse"] is the same on every other node).
/// extra holds log_lower / log_upper and "inside" (1 when the bracket holds
/// within 3 standard errors).
std::vector<EstimateReport> free_energy_bounds_check(const RieszParams& params, std::span<const int> n_list,
                                                     double beta, const FreeEnergyOptions& options = {});

}  // namespace riesz
