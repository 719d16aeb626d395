#include <doctest.h>

#include <cmath>
#include <numeric>

#include "riesz/oracle.hpp"
#include "riesz/quadrature.hpp"

using namespace riesz;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  const Rule1D r = gauss_legendre(8);
  double m14 = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    m14 += r.weights[i] * std::pow(r.nodes[i], 14);
    w += r.weights[i];
  }
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration") {
  const QuadratureResult q = adaptive_integrate([](double x) { return std::exp(-x); }, 0.0, 3.0, 1e-12);
  CHECK(q.value == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("partition function trivial cases") {
  const RieszParams p(1, 0.5);
  CHECK(exact_partition(p, 1, 1.0).value == 1.0);
  CHECK(exact_partition(p, 3, 0.0).value == doctest::Approx(1.0).epsilon(1e-12));
  const OracleResult z = exact_partition(p, 2, 1.0);
  CHECK(z.tolerance < 1e-6);
  CHECK_THROWS(exact_partition(p, 5, 1.0));
  CHECK_THROWS(exact_partition(RieszParams(2, 1.5), 2, 1.0));
}

TEST_CASE("n = 2 partition function agrees with the distance law normalizer") {
  // Z_2 = (1/2)∫_{Λ_2} e^{-β g_2(r)} dr = ∫_0^1 e^{-β g_2(r)} dr.
  const RieszParams p(1, 0.5);
  const PeriodizedPotential pp(p, 2);
  const QuadratureResult direct = adaptive_integrate(
      [&](double r) { return r == 0.0 ? 0.0 : std::exp(-pp(r)); }, 0.0, 1.0, 1e-11);
  const OracleResult z = exact_partition(p, 2, 1.0);
  CHECK(z.value == doctest::Approx(direct.value).epsilon(1e-8));
}

TEST_CASE("expectations") {
  const RieszParams p(1, 0.5);
  const auto one = exact_expectation([](std::span<const double>, double) { return 1.0; }, p, 2, 1.0);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
  const Window w({-0.5}, {0.5});
  const std::vector<double> cuts{-0.5, 0.5};
  const auto count = exact_expectation(
      [&](std::span<const double> pts, double) {
        double c = 0.0;
        for (double x : pts) {
          c += w.contains(std::span<const double>(&x, 1)) ? 1.0 : 0.0;
        }
        return c;
      },
      p, 3, 0.0, {}, cuts);
  CHECK(count.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("DLR residual vanishes for exterior-measurable functionals") {
  const RieszParams p(1, 0.5);
  const Window delta({-1.0 / 3.0}, {1.0 / 3.0});
  const std::vector<double> cuts{-1.0 / 3.0, 1.0 / 3.0};
  const auto f = [&](std::span<const double> pts, double) {
    double acc = 0.0;
    for (double x : pts) {
      if (!delta.contains(std::span<const double>(&x, 1))) {
        acc += x * x;
      }
    }
    return acc;
  };
  const OracleResult r = dlr_residual(p, 2, 1.0, delta, f, {}, {2, 8, 2}, cuts);
  CHECK(std::abs(r.value) <= 1e-10);
}

TEST_CASE("GNZ residual for the constant functional") {
  const RieszParams p(1, 0.5);
  const OracleResult r = gnz_residual(p, 2, 1.0, [](double, std::span<const double>) { return 1.0; });
  CHECK(std::abs(r.value) <= 1e-6);
}

TEST_CASE("pair distance law is a probability vector") {
  const auto probs = pair_distance_probabilities(RieszParams(1, 0.5), 1.0, 10);
  CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(probs.front() < probs.back());  // repulsion
}

TEST_CASE("configuration integral: OpenMP and serial agree") {
  const PeriodizedPotential pp(RieszParams(1, 0.5), 3);
  const double a = configuration_integral(pp, 3, 1.0, {});
  const double b = configuration_integral_serial(pp, 3, 1.0, {});
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}
