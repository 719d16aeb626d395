#include "riesz/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riesz/error.hpp"
#include "riesz/stats.hpp"
#include "riesz/summation.hpp"

namespace riesz {

double acceptance_probability(double beta, double delta_h) {
  if (is_infinite_energy(delta_h) || std::isnan(delta_h)) {
    return 0.0;
  }
  if (beta == 0.0 || delta_h <= 0.0) {
    return 1.0;
  }
  return std::exp(-beta * delta_h);
}

namespace {

bool accept_draw(double p, Rng& rng) {
  if (p >= 1.0) {
    return true;
  }
  if (p <= 0.0) {
    return false;
  }
  return rng.uniform() < p;
}

}  // namespace

ChainState::ChainState(Configuration gamma, std::shared_ptr<const PeriodizedPotential> pp, double beta, Rng rng,
                       double step_size)
    : gamma_(std::move(gamma)), pp_(std::move(pp)), beta_(beta), rng_(std::move(rng)), step_size_(step_size) {
  if (!pp_) {
    throw ParameterError("ChainState: potential is null");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ParameterError("ChainState: beta must be finite and >= 0");
  }
  if (gamma_.box().n() != pp_->n() || gamma_.dim() != pp_->dim()) {
    throw ParameterError("ChainState: configuration box does not match the potential");
  }
  rebuild();
  if (is_infinite_energy(energy_)) {
    throw ParameterError("ChainState: initial configuration has coincident points");
  }
}

double ChainState::acceptance_rate() const {
  return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

void ChainState::reset_counters() {
  accepted_ = 0;
  proposed_ = 0;
}

void ChainState::rebuild() {
  const std::size_t n = size();
  pairs_.assign(n * n, 0.0);
  field_.assign(n, 0.0);
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long ii = 0; ii < nn; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = pair_potential(*pp_, gamma_.point(i), gamma_.point(j));
      pairs_[i * n + j] = v;
      pairs_[j * n + i] = v;
    }
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        row += pairs_[i * n + j];
      }
    }
    field_[i] = row.value();
    for (std::size_t j = i + 1; j < n; ++j) {
      total += pairs_[i * n + j];
    }
  }
  energy_ = total.value();
}

double ChainState::audit() {
  const double cached = energy_;
  const EnergyBreakdown fresh = total_energy(gamma_, *pp_);
  const double dev = std::abs(cached - fresh.total) / std::max(1.0, std::abs(fresh.total));
  rebuild();
  if (!(dev <= 1e-8)) {
    std::ostringstream msg;
    msg << "energy cache drifted: cached " << cached << " vs recomputed " << fresh.total;
    throw AccuracyError(msg.str());
  }
  return dev;
}

double ChainState::move_energy(std::span<const std::size_t> indices, std::span<const double> positions,
                               std::vector<double>* new_pairs) const {
  const std::size_t n = size();
  const int d = gamma_.dim();
  const std::size_t m = indices.size();
  std::vector<char> moved(n, 0);
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t a = 0; a < m; ++a) {
    moved[indices[a]] = 1;
    slot[indices[a]] = a;
  }
  if (new_pairs) {
    new_pairs->assign(m * n, 0.0);
  }
  CompensatedSum delta;
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = indices[a];
    const std::span<const double> pi = positions.subspan(a * d, d);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      if (moved[j] && slot[j] < a) {
        if (new_pairs) {
          (*new_pairs)[a * n + j] = (*new_pairs)[slot[j] * n + i];
        }
        continue;  // pair already counted from the other side
      }
      const std::span<const double> pj = moved[j] ? positions.subspan(slot[j] * d, d) : gamma_.point(j);
      const double v = pair_potential(*pp_, pi, pj);
      if (is_infinite_energy(v)) {
        return kInfiniteEnergy;
      }
      if (new_pairs) {
        (*new_pairs)[a * n + j] = v;
      }
      delta += v - pairs_[i * n + j];
    }
  }
  return delta.value();
}

void ChainState::apply_moves(std::span<const std::size_t> indices, std::span<const double> positions,
                             const std::vector<double>& rows, double delta_h) {
  const std::size_t n = size();
  const int d = gamma_.dim();
  const std::size_t m = indices.size();
  std::vector<char> moved(n, 0);
  for (std::size_t i : indices) {
    moved[i] = 1;
  }
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = indices[a];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || moved[j]) {
        continue;
      }
      field_[j] += rows[a * n + j] - pairs_[i * n + j];
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = indices[a];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      pairs_[i * n + j] = rows[a * n + j];
      pairs_[j * n + i] = rows[a * n + j];
    }
    gamma_.set_point(i, positions.subspan(a * d, d));
  }
  for (std::size_t i : indices) {
    CompensatedSum row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        row += pairs_[i * n + j];
      }
    }
    field_[i] = row.value();
  }
  energy_ += delta_h;
}

bool metropolis_step(ChainState& state) {
  const std::size_t n = state.size();
  if (n == 0) {
    return false;
  }
  const int d = state.config().dim();
  Rng& rng = state.rng();
  const std::size_t i = rng.index(n);
  std::vector<double> pos(d);
  const auto x = state.config().point(i);
  for (int k = 0; k < d; ++k) {
    pos[k] = state.config().box().wrap(x[k] + state.step_size() * (rng.uniform() - 0.5));
  }
  const std::size_t idx[1] = {i};
  std::vector<double> rows;
  const double dh = state.move_energy(idx, pos, &rows);
  const bool ok = accept_draw(acceptance_probability(state.beta(), dh), rng);
  state.record(ok);
  if (ok) {
    state.apply_moves(idx, pos, rows, dh);
  }
  return ok;
}

std::size_t dlr_resample_window(ChainState& state, const Window& delta, int sweeps) {
  const Configuration& gamma = state.config();
  const int d = gamma.dim();
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (delta.contains(gamma.point(i))) {
      inside.push_back(i);
    }
  }
  if (inside.empty()) {
    return 0;
  }
  double width = std::numeric_limits<double>::infinity();
  for (int k = 0; k < d; ++k) {
    width = std::min(width, delta.upper()[k] - delta.lower()[k]);
  }
  const double h = std::min(state.step_size(), width);
  Rng& rng = state.rng();
  std::size_t accepted = 0;
  std::vector<double> pos(d);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i : inside) {
      const auto x = state.config().point(i);
      for (int k = 0; k < d; ++k) {
        pos[k] = state.config().box().wrap(x[k] + h * (rng.uniform() - 0.5));
      }
      if (!delta.contains(pos)) {
        continue;
      }
      const std::size_t idx[1] = {i};
      std::vector<double> rows;
      const double dh = state.move_energy(idx, pos, &rows);
      if (accept_draw(acceptance_probability(state.beta(), dh), rng)) {
        state.apply_moves(idx, pos, rows, dh);
        ++accepted;
      }
    }
  }
  return accepted;
}

bool windows_disjoint(const TorusBox& box, const Window& delta, std::span<const double> u) {
  const double L = box.side_length();
  for (int k = 0; k < delta.dim(); ++k) {
    const double w = delta.upper()[k] - delta.lower()[k];
    const double shift = std::abs(box.wrap(u[k]));
    if (shift >= w && L - shift >= w) {
      return true;
    }
  }
  return false;
}

SwapOutcome swap_windows(ChainState& state, const Window& delta, std::span<const double> u) {
  const Configuration& gamma = state.config();
  const TorusBox& box = gamma.box();
  if (!windows_disjoint(box, delta, u)) {
    return SwapOutcome::overlap;
  }
  const int d = gamma.dim();
  std::vector<std::size_t> indices;
  std::vector<double> positions;
  std::vector<double> shifted(d);
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto x = gamma.point(i);
    if (delta.contains(x)) {
      indices.push_back(i);
      for (int k = 0; k < d; ++k) {
        positions.push_back(box.wrap(x[k] + u[k]));
      }
      continue;
    }
    for (int k = 0; k < d; ++k) {
      shifted[k] = box.wrap(x[k] - u[k]);
    }
    if (delta.contains(shifted)) {
      indices.push_back(i);
      positions.insert(positions.end(), shifted.begin(), shifted.end());
    }
  }
  if (indices.empty()) {
    return SwapOutcome::accepted;
  }
  std::vector<double> rows;
  const double dh = state.move_energy(indices, positions, &rows);
  if (!accept_draw(acceptance_probability(state.beta(), dh), state.rng())) {
    return SwapOutcome::rejected;
  }
  state.apply_moves(indices, positions, rows, dh);
  return SwapOutcome::accepted;
}

Configuration stationarize(const Configuration& gamma, Rng& rng) {
  const int d = gamma.dim();
  const double L = gamma.box().side_length();
  std::vector<double> u(d);
  for (int k = 0; k < d; ++k) {
    u[k] = rng.uniform(-0.5 * L, 0.5 * L);
  }
  return translate_torus(gamma, u);
}

std::string to_string(Schedule::Kind kind) {
  switch (kind) {
    case Schedule::Kind::plain:
      return "plain";
    case Schedule::Kind::dlr:
      return "dlr";
    case Schedule::Kind::swap:
      return "swap";
  }
  return "plain";
}

Schedule::Kind schedule_kind_from_string(const std::string& name) {
  if (name == "plain") {
    return Schedule::Kind::plain;
  }
  if (name == "dlr") {
    return Schedule::Kind::dlr;
  }
  if (name == "swap") {
    return Schedule::Kind::swap;
  }
  throw ParameterError("unknown schedule '" + name + "' (expected plain, dlr or swap)");
}

ChainDiagnostics run_chain(ChainState& state, const ChainOptions& options, const SampleObserver& observer) {
  if (options.n_steps < options.burn_in) {
    throw ParameterError("run_chain: n_steps must be >= burn_in");
  }
  if (options.thin < 1) {
    throw ParameterError("run_chain: thin must be >= 1");
  }
  const Schedule& sch = options.schedule;
  if (sch.kind != Schedule::Kind::plain && !sch.window) {
    throw ParameterError("run_chain: dlr and swap schedules need a window");
  }
  if (sch.kind == Schedule::Kind::swap && sch.shifts.empty()) {
    throw ParameterError("run_chain: swap schedule needs at least one shift");
  }
  ChainDiagnostics diag;
  const double L = state.config().box().side_length();
  std::uint64_t tune_accepted = 0;
  std::uint64_t tune_proposed = 0;
  std::size_t shift_cursor = 0;
  std::uint64_t accepted_since_audit = 0;
  for (std::uint64_t step = 0; step < options.n_steps; ++step) {
    if (step == options.burn_in) {
      state.reset_counters();
    }
    const bool ok = metropolis_step(state);
    accepted_since_audit += ok ? 1 : 0;
    if (step < options.burn_in && options.tune) {
      ++tune_proposed;
      tune_accepted += ok ? 1 : 0;
      if (tune_proposed == 200) {
        const double rate = static_cast<double>(tune_accepted) / 200.0;
        double h = state.step_size();
        if (rate > 0.5) {
          h *= 1.25;
        } else if (rate < 0.3) {
          h *= 0.8;
        }
        state.set_step_size(std::clamp(h, 1e-6 * L, L));
        tune_accepted = 0;
        tune_proposed = 0;
      }
    }
    if (sch.kind != Schedule::Kind::plain && (step + 1) % static_cast<std::uint64_t>(sch.every) == 0) {
      if (sch.kind == Schedule::Kind::dlr) {
        dlr_resample_window(state, *sch.window, sch.inner_sweeps);
      } else {
        const auto& u = sch.shifts[shift_cursor];
        shift_cursor = (shift_cursor + 1) % sch.shifts.size();
        const SwapOutcome out = swap_windows(state, *sch.window, u);
        if (step >= options.burn_in) {
          ++diag.swaps_proposed;
          diag.swaps_accepted += out == SwapOutcome::accepted ? 1 : 0;
        }
      }
    }
    if (options.audit_every > 0 && accepted_since_audit >= options.audit_every) {
      diag.max_audit_deviation = std::max(diag.max_audit_deviation, state.audit());
      accepted_since_audit = 0;
    }
    if (step >= options.burn_in && (step - options.burn_in) % options.thin == 0) {
      diag.energies.push_back(state.energy());
      if (observer) {
        observer(state, diag.n_samples);
      }
      ++diag.n_samples;
    }
  }
  diag.acceptance_rate = state.acceptance_rate();
  diag.step_size = state.step_size();
  if (diag.energies.size() >= 20) {
    const MeanEstimate m = batch_means(diag.energies, 20);
    diag.energy_mean = m.mean;
    diag.energy_stderr = m.std_error;
    diag.autocorr_time = integrated_autocorr_time(diag.energies);
  } else {
    double acc = 0.0;
    for (double e : diag.energies) {
      acc += e;
    }
    diag.energy_mean = diag.energies.empty() ? 0.0 : acc / static_cast<double>(diag.energies.size());
    diag.energy_stderr = std::numeric_limits<double>::quiet_NaN();
    diag.autocorr_time = std::numeric_limits<double>::quiet_NaN();
  }
  return diag;
}

namespace {

double discrete_pair_energy(const PeriodizedPotential& pp, int cells, int a, int b) {
  const double L = pp.side_length();
  return pp((a + 0.5) * L / cells - (b + 0.5) * L / cells);
}

}  // namespace

std::vector<double> discrete_transition_matrix(const PeriodizedPotential& pp, double beta, int cells, int max_jump) {
  if (pp.dim() != 1 || cells < 3 || max_jump < 1 || 2 * max_jump >= cells) {
    throw ParameterError("discrete_transition_matrix: need d = 1, cells >= 3, 1 <= max_jump < cells/2");
  }
  const std::size_t S = static_cast<std::size_t>(cells) * cells;
  std::vector<double> P(S * S, 0.0);
  const double q = 1.0 / (2.0 * (2.0 * max_jump));  // point choice × jump choice
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; b < cells; ++b) {
      if (a == b) {
        continue;
      }
      const std::size_t from = static_cast<std::size_t>(a) * cells + b;
      const double h0 = discrete_pair_energy(pp, cells, a, b);
      double stay = 1.0;
      for (int which = 0; which < 2; ++which) {
        for (int j = -max_jump; j <= max_jump; ++j) {
          if (j == 0) {
            continue;
          }
          int na = a;
          int nb = b;
          (which == 0 ? na : nb) = (((which == 0 ? a : b) + j) % cells + cells) % cells;
          const double h1 = na == nb ? kInfiniteEnergy : discrete_pair_energy(pp, cells, na, nb);
          const double acc = acceptance_probability(beta, is_infinite_energy(h1) ? kInfiniteEnergy : h1 - h0);
          const std::size_t to = static_cast<std::size_t>(na) * cells + nb;
          P[from * S + to] += q * acc;
          stay -= q * acc;
        }
      }
      P[from * S + from] += stay;
    }
  }
  return P;
}

double detailed_balance_violation(const PeriodizedPotential& pp, double beta, int cells, int max_jump) {
  const std::vector<double> P = discrete_transition_matrix(pp, beta, cells, max_jump);
  const std::size_t S = static_cast<std::size_t>(cells) * cells;
  std::vector<double> pi(S, 0.0);
  double z = 0.0;
  double h_min = std::numeric_limits<double>::infinity();
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; b < cells; ++b) {
      if (a != b) {
        h_min = std::min(h_min, discrete_pair_energy(pp, cells, a, b));
      }
    }
  }
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; b < cells; ++b) {
      if (a != b) {
        const double w = std::exp(-beta * (discrete_pair_energy(pp, cells, a, b) - h_min));
        pi[static_cast<std::size_t>(a) * cells + b] = w;
        z += w;
      }
    }
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < S; ++t) {
      worst = std::max(worst, std::abs(pi[s] / z * P[s * S + t] - pi[t] / z * P[t * S + s]));
    }
  }
  return worst;
}

}  // namespace riesz
