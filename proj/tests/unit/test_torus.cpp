#include <doctest.h>

#include <array>
#include <cmath>

#include "riesz/error.hpp"
#include "riesz/rng.hpp"
#include "riesz/torus.hpp"
#include "riesz/wrap.hpp"

using namespace riesz;

TEST_CASE("wrap maps into [-L/2, L/2)") {
  CHECK(wrap_coordinate(0.0, 4.0) == 0.0);
  CHECK(wrap_coordinate(2.0, 4.0) == -2.0);
  CHECK(wrap_coordinate(-2.0, 4.0) == -2.0);
  CHECK(wrap_coordinate(5.5, 4.0) == doctest::Approx(1.5));
  CHECK(wrap_coordinate(-9.0, 4.0) == doctest::Approx(-1.0));
}

TEST_CASE("torus box side length") {
  CHECK(TorusBox(27, 3).side_length() == 3.0);
  CHECK(TorusBox(16, 2).side_length() == 4.0);
  CHECK(TorusBox(5, 1).volume() == 5.0);
  CHECK_THROWS_AS(TorusBox(0, 1), ParameterError);
}

TEST_CASE("configuration add, duplicates and removal") {
  Configuration c{TorusBox(4, 1)};
  c.add(0.5);
  CHECK_THROWS(c.add(4.5));  // wraps onto 0.5
  CHECK(c.size() == 1);
  c.add(-1.5);
  CHECK(c.size() == 2);
  c.remove(0);
  CHECK(c.point(0)[0] == doctest::Approx(-1.5));
}

TEST_CASE("window counting, half-open convention") {
  Configuration c{TorusBox(8, 1)};
  for (double x : {-1.0, -0.5, 0.0, 0.99, 1.0, 3.0}) {
    c.add(x);
  }
  const Window w = Window::centered(1, 2.0);
  CHECK(count_in(c, w) == 4);
  const std::array<double, 1> u{3.0};
  CHECK(count_in_shifted(c, w, u) == 1);  // [2, 4) holds 3.0 only
}

TEST_CASE("binomial and Poisson samplers") {
  Rng rng(1, 0);
  const TorusBox box(10, 1);
  const Window all = Window::centered(1, 10.0);
  CHECK(sample_binomial(box, all, 0, rng).empty());
  const Configuration b = sample_binomial(box, all, 10, rng);
  CHECK(b.size() == 10);
  const Window w({1.0}, {3.0});
  double total = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const Configuration p = sample_poisson(box, w, 2.0, rng);
    for (std::size_t j = 0; j < p.size(); ++j) {
      CHECK(w.contains(p.point(j)));
    }
    total += static_cast<double>(p.size());
  }
  CHECK(total / 4000.0 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("perturbed lattice lies in its class") {
  Rng rng(2, 0);
  for (auto [n, d] : {std::pair{8, 1}, std::pair{10, 2}, std::pair{9, 2}, std::pair{30, 3}}) {
    const Configuration g = perturbed_lattice(n, d, 0.3, rng);
    CHECK(static_cast<int>(g.size()) == n);
    CHECK(in_perturbed_class(g, 0.3));
  }
  CHECK(lattice_root(10, 2) == 3);
  CHECK(lattice_root(27, 3) == 3);
  CHECK_THROWS_AS(perturbed_lattice(4, 1, 0.7, rng), ParameterError);
}

TEST_CASE("property: translations preserve counts of translated windows") {
  Rng rng(4, 0);
  const TorusBox box(12, 1);
  const Configuration g = sample_binomial(box, Window::centered(1, 12.0), 12, rng);
  const std::array<double, 1> zero{0.0};
  CHECK(translate_torus(g, zero).coords() == g.coords());
  const Window w = Window::centered(1, 3.0);
  for (int i = 0; i < 20; ++i) {
    const std::array<double, 1> u{rng.uniform(-6.0, 6.0)};
    CHECK(count_in_shifted(translate_torus(g, u), w, u) == count_in(g, w));
  }
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(9, 0);
  Rng b(9, 0);
  Rng c(9, 1);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
}

TEST_CASE("perturbed-lattice neighbourhoods have volume delta^d in d = 1") {
  // Bin(C_{δ,n}) = n! Π|Δ_j| / n^n = n!(δ/n)^n exactly when every cell is interior.
  const auto cells = perturbed_lattice_cells(TorusBox(3, 1), 0.1);
  CHECK(cells.size() == 3);
  for (const auto& c : cells) {
    CHECK(c.interior);
    CHECK(c.upper[0] - c.lower[0] == doctest::Approx(0.1).epsilon(1e-12));
  }
}
