#include <doctest.h>

#include <array>
#include <cmath>

#include "riesz/error.hpp"
#include "riesz/oracle.hpp"
#include "riesz/potential.hpp"
#include "riesz/rng.hpp"

using namespace riesz;

namespace {

// Reference values from 30-digit evaluations of the Hurwitz-zeta form.
constexpr double kGStar1_03 = -0.05034078115808757;
constexpr double kGStar1_05 = -0.09228189287298353;
constexpr double kGStar1_07 = -0.14176091539915529;
constexpr double kZeta03 = -0.9045592572539840;
constexpr double kZeta05 = -1.4603545088095868;
constexpr double kZeta07 = -2.7783884455536961;

}  // namespace

TEST_CASE("parameter gate rejects s outside (d-1, d)") {
  CHECK_THROWS_AS(RieszParams(1, 1.5), ParameterError);
  CHECK_THROWS_AS(RieszParams(1, 0.0), ParameterError);
  CHECK_THROWS_AS(RieszParams(2, 1.0), ParameterError);
  CHECK_THROWS_AS(RieszParams(0, 0.5), ParameterError);
  CHECK_NOTHROW(RieszParams(3, 2.5));
}

TEST_CASE("free-space potential and its split") {
  const RieszParams p(1, 0.5);
  CHECK(eval_riesz(p, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(is_infinite_energy(eval_riesz(p, 0.0)));
  CHECK_THROWS_AS(riesz_split(p, 0.0), SingularityError);
  for (double r : {1e-3, 0.1, 1.0, 3.7, 10.0, 1e4}) {
    const RieszSplit sp = riesz_split(p, r);
    CHECK(sp.g1 + sp.g2 == doctest::Approx(eval_riesz(p, r)).epsilon(1e-14));
    CHECK(sp.g2 > 0.0);
  }
  CHECK(riesz_split(p, 10.0).g2 == doctest::Approx(0.00078566511558075676).epsilon(1e-13));
  const RieszParams p3(3, 2.5);
  const std::array<double, 3> x{1.0, 2.0, 2.0};
  CHECK(eval_riesz(p3, x) == doctest::Approx(std::pow(3.0, -2.5)).epsilon(1e-15));
}

TEST_CASE("integral of g2: quadrature against closed form") {
  CHECK(integrate_g2_closed_form(RieszParams(1, 0.5)) == doctest::Approx(2.39628046947118441).epsilon(1e-14));
  for (auto [d, s] : {std::pair{1, 0.3}, std::pair{1, 0.7}, std::pair{2, 1.5}, std::pair{3, 2.2}}) {
    const RieszParams p(d, s);
    const QuadratureResult q = integrate_g2(p, 1e-10);
    CHECK(q.value == doctest::Approx(integrate_g2_closed_form(p)).epsilon(1e-8));
  }
}

TEST_CASE("cell means scale as n^{-s/d} and match the closed form in d = 1") {
  const RieszParams p(1, 0.5);
  for (int k : {1, 2, 5}) {
    const double closed = (std::pow(k + 0.5, 0.5) - std::pow(k - 0.5, 0.5)) / 0.5;
    CHECK(cell_mean(p, 1, k) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(cell_mean(p, 9, k) == doctest::Approx(closed / 3.0).epsilon(1e-12));
  }
  CHECK(cell_mean(p, 1, 0) == doctest::Approx(2.0 * std::pow(0.5, 0.5) / 0.5).epsilon(1e-12));
}

TEST_CASE("periodized potential: frozen values at s = 0.5") {
  const RieszParams p(1, 0.5);
  const PeriodizedPotential g1(p, 1);
  CHECK(g1(0.3) == doctest::Approx(-0.99938377962515471).epsilon(1e-10));
  const PeriodizedPotential g2(p, 2);
  CHECK(g2(1.0) == doctest::Approx(-0.85545586538795644).epsilon(1e-10));
  CHECK(g2(0.5) == doctest::Approx(-0.60489864342163037).epsilon(1e-10));
  CHECK(is_infinite_energy(g2(0.0)));
  CHECK(is_infinite_energy(g2(4.0)));
}

TEST_CASE("self constant and epsilon_n") {
  const std::array<std::array<double, 3>, 3> table{
      {{0.3, kGStar1_03, kZeta03}, {0.5, kGStar1_05, kZeta05}, {0.7, kGStar1_07, kZeta07}}};
  for (const auto& row : table) {
    const RieszParams p(1, row[0]);
    const SelfConstant c1 = self_constant(p, 1);
    CHECK(c1.g_star == doctest::Approx(row[1]).epsilon(1e-9));
    for (int n : {1, 4, 32}) {
      const SelfConstant c = self_constant(p, n);
      CHECK(c.epsilon_n == doctest::Approx(row[2] * std::pow(n, -row[0])).epsilon(1e-9));
      CHECK(c.epsilon_n < 0.0);
    }
  }
}

TEST_CASE("tail bound decreases in K and certifies a wider truncation") {
  const RieszParams p(1, 0.5);
  CHECK(tail_bound(p, 8, 8) < tail_bound(p, 8, 4));
  CHECK_THROWS_AS(tail_bound(p, 8, 1), ParameterError);
  const PeriodizedPotential a(p, 8);
  const PeriodizedPotential b(p, 8, 4 * a.truncation_radius());
  Rng rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-4.0, 4.0);
    CHECK(std::abs(a(x) - b(x)) <= a.tail_bound() + b.tail_bound());
  }
}

TEST_CASE("property: g_n is even and L-periodic (d = 1, 2)") {
  Rng rng(11, 0);
  for (auto [d, s] : {std::pair{1, 0.4}, std::pair{2, 1.5}}) {
    const RieszParams p(d, s);
    const PeriodizedPotential pp(p, 4);
    const double L = pp.side_length();
    std::vector<double> x(d);
    std::vector<double> y(d);
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < d; ++j) {
        x[j] = rng.uniform(-L, L);
        y[j] = -x[j];
      }
      const double v = pp(x);
      CHECK(std::abs(pp(y) - v) <= 2.0 * pp.tail_bound() + 1e-12);
      y = x;
      y[d - 1] += 2.0 * L;
      CHECK(std::abs(pp(y) - v) <= 2.0 * pp.tail_bound() + 1e-12);
    }
  }
}

TEST_CASE("reference lattice sum: symmetry and truncation pair") {
  const RieszParams p(1, 0.5);
  const OracleResult a = reference_periodized(p, 8, 1.3, 100000);
  const OracleResult b = reference_periodized(p, 8, -1.3, 100000);
  CHECK(std::abs(a.value - b.value) <= a.tolerance + b.tolerance);
  const OracleResult c = reference_periodized(p, 8, 1.3, 1000000);
  CHECK(std::abs(a.value - c.value) <= a.tolerance);
  const OracleResult serial = reference_periodized_serial(p, 8, 1.3, 100000);
  CHECK(serial.value == doctest::Approx(a.value).epsilon(1e-14));
}

TEST_CASE("zero mean of g_n over the cell") {
  for (double s : {0.3, 0.7}) {
    const PeriodizedPotential pp(RieszParams(1, s), 8);
    const OracleResult z = periodized_cell_integral(pp);
    CHECK(std::abs(z.value) <= z.tolerance + 8 * pp.tail_bound());
  }
}

TEST_CASE("epsilon_n vanishes as n grows") {
  const RieszParams p(1, 0.5);
  CHECK(std::abs(self_constant(p, 32).epsilon_n) < std::abs(self_constant(p, 2).epsilon_n));
}
