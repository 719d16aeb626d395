#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>

#include "riesz/energy.hpp"
#include "riesz/potential.hpp"
#include "riesz/sampler.hpp"

using namespace riesz;

namespace {

ChainState make_state(int n, double beta, std::uint64_t seed) {
  const RieszParams p(1, 0.5);
  Rng init(seed, 0);
  return ChainState(perturbed_lattice(n, 1, 0.25, init), std::make_shared<const PeriodizedPotential>(p, n), beta,
                    Rng(seed, 1));
}

}  // namespace

TEST_CASE("acceptance probability edge cases") {
  CHECK(acceptance_probability(1.0, kInfiniteEnergy) == 0.0);
  CHECK(acceptance_probability(0.0, 5.0) == 1.0);
  CHECK(acceptance_probability(1.0, -2.0) == 1.0);
  CHECK(acceptance_probability(2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("cached energy survives long runs (audit)") {
  ChainState st = make_state(16, 1.0, 3);
  ChainOptions o;
  o.n_steps = 50000;
  o.burn_in = 5000;
  o.thin = 10;
  o.audit_every = 1000;
  const ChainDiagnostics d = run_chain(st, o);
  CHECK(d.max_audit_deviation < 1e-10);
  CHECK(st.audit() < 1e-10);
  CHECK(d.acceptance_rate > 0.1);
  CHECK(d.n_samples == 4500);
}

TEST_CASE("chains are deterministic in the seed") {
  ChainOptions o;
  o.n_steps = 2000;
  o.burn_in = 500;
  ChainState a = make_state(8, 1.0, 21);
  ChainState b = make_state(8, 1.0, 21);
  run_chain(a, o);
  run_chain(b, o);
  CHECK(a.config().coords() == b.config().coords());
}

TEST_CASE("discretized kernel satisfies detailed balance") {
  const PeriodizedPotential pp(RieszParams(1, 0.5), 2);
  CHECK(detailed_balance_violation(pp, 1.0, 16, 3) <= 1e-12);
  const auto P = discrete_transition_matrix(pp, 1.0, 8, 2);
  const std::size_t S = 64;
  for (std::size_t a = 0; a < S; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < S; ++b) {
      row += P[a * S + b];
    }
    if (a / 8 != a % 8) {
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("window resampling leaves the exterior and the window count unchanged") {
  ChainState st = make_state(12, 1.0, 5);
  const Window w = Window::centered(1, 3.0);
  const Configuration before = st.config();
  const std::size_t count = count_in(before, w);
  dlr_resample_window(st, w, 10);
  CHECK(count_in(st.config(), w) == count);
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (!w.contains(before.point(i))) {
      CHECK(st.config().point(i)[0] == before.point(i)[0]);
    }
  }
  CHECK(st.audit() < 1e-10);
}

TEST_CASE("swap move: overlap detection and count exchange") {
  ChainState st = make_state(12, 0.0, 6);
  const Window w = Window::centered(1, 2.0);
  const std::array<double, 1> near{1.0};
  CHECK_FALSE(windows_disjoint(st.config().box(), w, near));
  CHECK(swap_windows(st, w, near) == SwapOutcome::overlap);
  const std::array<double, 1> u{5.0};
  const std::size_t a = count_in(st.config(), w);
  const std::size_t b = count_in_shifted(st.config(), w, u);
  CHECK(swap_windows(st, w, u) == SwapOutcome::accepted);  // β = 0
  CHECK(count_in(st.config(), w) == b);
  CHECK(count_in_shifted(st.config(), w, u) == a);
  CHECK(swap_windows(st, w, u) == SwapOutcome::accepted);
  CHECK(count_in(st.config(), w) == a);
  CHECK(st.audit() < 1e-10);
}

TEST_CASE("stationarize keeps the size") {
  ChainState st = make_state(8, 1.0, 7);
  Rng r(1, 2);
  CHECK(stationarize(st.config(), r).size() == 8);
}

TEST_CASE("schedule names round-trip") {
  for (auto k : {Schedule::Kind::plain, Schedule::Kind::dlr, Schedule::Kind::swap}) {
    CHECK(schedule_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(schedule_kind_from_string("gibbs"));
}
