#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz/energy.hpp"
#include "riesz/potential.hpp"
#include "riesz/rng.hpp"
#include "riesz/torus.hpp"

namespace riesz {

/// Metropolis acceptance probability min(1, e^{-β ΔH}); exactly 0 for a
/// +infinity ΔH and exactly 1 for β = 0 otherwise (no 0·∞).
double acceptance_probability(double beta, double delta_h);

/// Canonical-ensemble chain state with cached pair matrix and per-point fields
/// (row sums of the pair matrix), so that a single-point move costs O(n).
class ChainState {
 public:
  ChainState(Configuration gamma, std::shared_ptr<const PeriodizedPotential> pp, double beta, Rng rng,
             double step_size = 1.0);

  const Configuration& config() const { return gamma_; }
  const PeriodizedPotential& potential() const { return *pp_; }
  double beta() const { return beta_; }
  double energy() const { return energy_; }
  Rng& rng() { return rng_; }
  double step_size() const { return step_size_; }
  void set_step_size(double h) { step_size_ = h; }

  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t proposed() const { return proposed_; }
  double acceptance_rate() const;
  void reset_counters();

  /// g_n between points i and j from the cache.
  double pair(std::size_t i, std::size_t j) const { return pairs_[i * size() + j]; }
  std::size_t size() const { return gamma_.size(); }

  /// Recomputes H_n from scratch, resynchronizes the cache and returns the
  /// relative deviation |cached - fresh| / max(1, |fresh|). Throws
  /// AccuracyError above 1e-8.
  double audit();

  /// Replaces the positions of `indices` by `positions` (flat, d per point)
  /// given the new pair rows and energy change from move_energy.
  void apply_moves(std::span<const std::size_t> indices, std::span<const double> positions,
                   const std::vector<double>& new_pairs, double delta_h);
  /// ΔH for moving `indices` to `positions`, using the cached old pairs.
  /// +infinity when any new pair coincides.
  double move_energy(std::span<const std::size_t> indices, std::span<const double> positions,
                     std::vector<double>* new_pairs = nullptr) const;

  void record(bool accepted_move) {
    ++proposed_;
    accepted_ += accepted_move ? 1 : 0;
  }

 private:
  void rebuild();

  Configuration gamma_;
  std::shared_ptr<const PeriodizedPotential> pp_;
  double beta_;
  Rng rng_;
  double step_size_;
  std::vector<double> pairs_;
  std::vector<double> field_;
  double energy_ = 0.0;
  std::uint64_t accepted_ = 0;
  std::uint64_t proposed_ = 0;
};

/// One Metropolis update of a uniformly chosen point: uniform displacement in
/// a cube of side step_size, wrapped onto the torus. Returns acceptance.
bool metropolis_step(ChainState& state);

/// Metropolis-within-window resampling of the points in Δ given the exterior
/// and the window count: `sweeps` sweeps over the window points, proposals
/// leaving Δ rejected. Returns the number of accepted inner moves.
std::size_t dlr_resample_window(ChainState& state, const Window& delta, int sweeps = 10);

enum class SwapOutcome { accepted, rejected, overlap };

/// Exchange proposal γ_Δ + u ↔ γ_{Δ+u} - u (torus involution) accepted with
/// the Metropolis ratio. Overlapping windows are reported, never applied.
SwapOutcome swap_windows(ChainState& state, const Window& delta, std::span<const double> u);

/// Δ and Δ + u disjoint on the torus.
bool windows_disjoint(const TorusBox& box, const Window& delta, std::span<const double> u);

/// Uniform random torus translation.
Configuration stationarize(const Configuration& gamma, Rng& rng);

struct Schedule {
  enum class Kind { plain, dlr, swap };
  Kind kind = Kind::plain;
  std::optional<Window> window;
  std::vector<std::vector<double>> shifts;  ///< swap translations, cycled
  int every = 10;                           ///< window move after every `every` Metropolis steps
  int inner_sweeps = 10;
};

std::string to_string(Schedule::Kind kind);
Schedule::Kind schedule_kind_from_string(const std::string& name);

struct ChainOptions {
  std::uint64_t n_steps = 0;  ///< total steps including burn-in
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
  bool tune = true;  ///< adapt the step size during burn-in towards 30-50% acceptance
  std::uint64_t audit_every = 10000;  ///< accepted moves between cache audits
  Schedule schedule;
};

struct ChainDiagnostics {
  double acceptance_rate = 0.0;
  double autocorr_time = 0.0;
  double energy_mean = 0.0;
  double energy_stderr = 0.0;
  std::uint64_t n_samples = 0;
  double step_size = 0.0;
  double max_audit_deviation = 0.0;
  std::uint64_t swaps_accepted = 0;
  std::uint64_t swaps_proposed = 0;
  std::vector<double> energies;  ///< H_n at every emitted sample
};

using SampleObserver = std::function<void(const ChainState&, std::uint64_t sample_index)>;

/// Runs the chain; `observer` sees every emitted (post burn-in, thinned) state.
ChainDiagnostics run_chain(ChainState& state, const ChainOptions& options, const SampleObserver& observer = {});

/// Transition matrix of the Metropolis kernel discretized to `cells` positions
/// per axis (d = 1, two points, jumps uniform on {-max_jump..max_jump}∖{0}).
/// States are ordered pairs of distinct cells, indexed a*cells + b.
std::vector<double> discrete_transition_matrix(const PeriodizedPotential& pp, double beta, int cells, int max_jump);

/// max |π(a)P(a,b) - π(b)P(b,a)| for the discretized target π ∝ e^{-βH}.
double detailed_balance_violation(const PeriodizedPotential& pp, double beta, int cells, int max_jump);

}  // namespace riesz
