#include "riesz/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riesz/error.hpp"
#include "riesz/wrap.hpp"

namespace riesz {

TorusBox::TorusBox(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 1) {
    throw ParameterError("TorusBox: n and d must be >= 1");
  }
  L_ = std::pow(static_cast<double>(n), 1.0 / d);
  const double rounded = std::round(L_);
  if (std::abs(L_ - rounded) < 1e-12 * L_) {
    L_ = rounded;  // exact side for perfect powers
  }
}

double TorusBox::wrap(double x) const { return wrap_coordinate(x, L_); }

void TorusBox::wrap_in_place(std::span<double> x) const {
  for (double& v : x) {
    v = wrap_coordinate(v, L_);
  }
}

bool operator==(const TorusBox& a, const TorusBox& b) { return a.n() == b.n() && a.dim() == b.dim(); }

Window::Window(std::vector<double> lower, std::vector<double> upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.empty()) {
    throw ParameterError("Window: lower and upper must have the same positive dimension");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw ParameterError("Window: lower < upper must hold componentwise");
    }
  }
}

Window Window::centered(int d, double volume) {
  const double h = 0.5 * std::pow(volume, 1.0 / d);
  return Window(std::vector<double>(d, -h), std::vector<double>(d, h));
}

double Window::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    v *= upper_[i] - lower_[i];
  }
  return v;
}

bool Window::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] < upper_[i])) {
      return false;
    }
  }
  return true;
}

bool Window::inside(const TorusBox& box) const {
  if (dim() != box.dim()) {
    return false;
  }
  const double h = 0.5 * box.side_length();
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (lower_[i] < -h - 1e-12 || upper_[i] > h + 1e-12) {
      return false;
    }
  }
  return true;
}

void Configuration::add(std::span<const double> x) {
  const int d = dim();
  if (static_cast<int>(x.size()) != d) {
    throw ParameterError("Configuration::add: point has the wrong dimension");
  }
  const std::vector<double> w = riesz::wrap(box_, x);
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::equal(w.begin(), w.end(), coords_.begin() + i * d)) {
      throw ParameterError("Configuration::add: duplicate point");
    }
  }
  coords_.insert(coords_.end(), w.begin(), w.end());
}

void Configuration::add(double x) { add(std::span<const double>(&x, 1)); }

void Configuration::set_point(std::size_t i, std::span<const double> x) {
  const int d = dim();
  for (int k = 0; k < d; ++k) {
    coords_[i * d + k] = box_.wrap(x[k]);
  }
}

void Configuration::append_unchecked(std::span<const double> x) {
  for (int k = 0; k < dim(); ++k) {
    coords_.push_back(box_.wrap(x[k]));
  }
}

void Configuration::remove(std::size_t i) {
  const int d = dim();
  coords_.erase(coords_.begin() + i * d, coords_.begin() + (i + 1) * d);
}

std::vector<double> wrap(const TorusBox& box, std::span<const double> x) {
  std::vector<double> w(x.begin(), x.end());
  box.wrap_in_place(w);
  return w;
}

std::vector<double> torus_diff(const TorusBox& box, std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = box.wrap(x[i] - y[i]);
  }
  return w;
}

std::size_t count_in(const Configuration& gamma, const Window& window) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (window.contains(gamma.point(i))) {
      ++c;
    }
  }
  return c;
}

std::size_t count_in_shifted(const Configuration& gamma, const Window& window, std::span<const double> u) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (window.contains(torus_diff(gamma.box(), gamma.point(i), u))) {
      ++c;
    }
  }
  return c;
}

namespace {

void fill_uniform(Configuration& gamma, const Window& region, std::size_t N, Rng& rng) {
  const int d = region.dim();
  std::vector<double> x(d);
  for (std::size_t j = 0; j < N; ++j) {
    for (int i = 0; i < d; ++i) {
      x[i] = rng.uniform(region.lower()[i], region.upper()[i]);
    }
    gamma.add(x);
  }
}

}  // namespace

Configuration sample_binomial(const TorusBox& box, const Window& region, std::size_t N, Rng& rng) {
  if (!(region.volume() > 0.0)) {
    throw ParameterError("sample_binomial: region must have positive volume");
  }
  Configuration gamma(box);
  fill_uniform(gamma, region, N, rng);
  return gamma;
}

Configuration sample_poisson(const TorusBox& box, const Window& region, double intensity, Rng& rng) {
  if (intensity < 0.0) {
    throw ParameterError("sample_poisson: intensity must be >= 0");
  }
  Configuration gamma(box);
  const std::uint64_t N = rng.poisson(intensity * region.volume());
  fill_uniform(gamma, region, N, rng);
  return gamma;
}

int lattice_root(int n, int d) {
  int r = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / d)));
  auto power = [d](int b) {
    long long p = 1;
    for (int i = 0; i < d; ++i) {
      p *= b;
    }
    return p;
  };
  while (power(r + 1) <= n) {
    ++r;
  }
  while (r > 0 && power(r) > n) {
    --r;
  }
  return r;
}

std::vector<LatticeCell> perturbed_lattice_cells(const TorusBox& box, double delta) {
  const int d = box.dim();
  const int r = lattice_root(box.n(), d);
  const double L = box.side_length();
  const double lo = -0.5 * L;
  std::vector<LatticeCell> interior;
  std::vector<LatticeCell> peripheral;
  std::vector<int> j(d, 0);
  while (true) {
    LatticeCell cell;
    cell.center.resize(d);
    cell.lower.resize(d);
    cell.upper.resize(d);
    bool empty = false;
    for (int i = 0; i < d; ++i) {
      const double a = lo + j[i];
      const double b = std::min(a + 1.0, 0.5 * L);
      if (!(b > a)) {
        empty = true;
      }
      const double c = 0.5 * (a + b);
      cell.center[i] = c;
      cell.lower[i] = std::max(a, c - 0.5 * delta);
      cell.upper[i] = std::min(b, c + 0.5 * delta);
      if (j[i] >= r) {
        cell.interior = false;
      }
    }
    if (!empty) {
      (cell.interior ? interior : peripheral).push_back(std::move(cell));
    }
    int i = 0;
    while (i < d && ++j[i] == r + 1) {
      j[i] = 0;
      ++i;
    }
    if (i == d) {
      break;
    }
  }
  interior.insert(interior.end(), std::make_move_iterator(peripheral.begin()), std::make_move_iterator(peripheral.end()));
  return interior;
}

Configuration perturbed_lattice(int n, int d, double delta, Rng& rng) {
  if (!(delta > 0.0 && delta < 0.5)) {
    std::ostringstream msg;
    msg << "perturbed_lattice: delta must lie in (0, 1/2), got " << delta;
    throw ParameterError(msg.str());
  }
  const TorusBox box(n, d);
  const std::vector<LatticeCell> cells = perturbed_lattice_cells(box, delta);
  int interior = 0;
  for (const LatticeCell& c : cells) {
    interior += c.interior ? 1 : 0;
  }
  const std::size_t remaining = static_cast<std::size_t>(n - interior);
  std::vector<std::size_t> chosen;
  for (int c = 0; c < interior; ++c) {
    chosen.push_back(c);
  }
  // Partial Fisher–Yates over the peripheral cells.
  std::vector<std::size_t> periph(cells.size() - interior);
  std::iota(periph.begin(), periph.end(), static_cast<std::size_t>(interior));
  for (std::size_t k = 0; k < remaining; ++k) {
    const std::size_t pick = k + rng.index(periph.size() - k);
    std::swap(periph[k], periph[pick]);
    chosen.push_back(periph[k]);
  }
  Configuration gamma(box);
  std::vector<double> x(d);
  for (std::size_t c : chosen) {
    for (int i = 0; i < d; ++i) {
      x[i] = rng.uniform(cells[c].lower[i], cells[c].upper[i]);
    }
    gamma.add(x);
  }
  return gamma;
}

bool in_perturbed_class(const Configuration& gamma, double delta) {
  const TorusBox& box = gamma.box();
  if (static_cast<int>(gamma.size()) != box.n()) {
    return false;
  }
  const std::vector<LatticeCell> cells = perturbed_lattice_cells(box, delta);
  std::vector<int> hits(cells.size(), 0);
  const int d = box.dim();
  for (std::size_t p = 0; p < gamma.size(); ++p) {
    const auto x = gamma.point(p);
    bool found = false;
    for (std::size_t c = 0; c < cells.size() && !found; ++c) {
      bool in = true;
      for (int i = 0; i < d && in; ++i) {
        in = x[i] >= cells[c].lower[i] && x[i] <= cells[c].upper[i];
      }
      if (in) {
        ++hits[c];
        found = true;
      }
    }
    if (!found) {
      return false;
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (hits[c] > 1 || (cells[c].interior && hits[c] != 1)) {
      return false;
    }
  }
  return true;
}

Configuration translate_torus(const Configuration& gamma, std::span<const double> u) {
  Configuration out(gamma.box());
  const int d = gamma.dim();
  std::vector<double> x(d);
  for (std::size_t p = 0; p < gamma.size(); ++p) {
    const auto y = gamma.point(p);
    for (int i = 0; i < d; ++i) {
      x[i] = y[i] + u[i];
    }
    // Keeps indices aligned with the input even if rounding merges two points.
    out.append_unchecked(x);
  }
  return out;
}

}  // namespace riesz
