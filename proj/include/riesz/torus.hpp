#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riesz/rng.hpp"

namespace riesz {

/// Λ_n = [-L/2, L/2)^d with L = n^{1/d}, viewed as a torus.
class TorusBox {
 public:
  TorusBox(int n, int d);

  int n() const { return n_; }
  int dim() const { return d_; }
  double side_length() const { return L_; }
  double volume() const { return static_cast<double>(n_); }

  double wrap(double x) const;
  void wrap_in_place(std::span<double> x) const;

 private:
  int n_;
  int d_;
  double L_;
};

bool operator==(const TorusBox& a, const TorusBox& b);

/// Axis-aligned box [lower, upper) in the fundamental domain.
class Window {
 public:
  Window(std::vector<double> lower, std::vector<double> upper);

  /// Centered cube of the given volume (Λ_p for volume p).
  static Window centered(int d, double volume);

  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double volume() const;
  bool contains(std::span<const double> x) const;
  /// True when the window lies inside the fundamental domain of `box`.
  bool inside(const TorusBox& box) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Finite point set in the fundamental domain. Coordinates are stored flat,
/// point i occupying [i*d, (i+1)*d).
class Configuration {
 public:
  explicit Configuration(const TorusBox& box) : box_(box) {}

  const TorusBox& box() const { return box_; }
  int dim() const { return box_.dim(); }
  std::size_t size() const { return coords_.size() / box_.dim(); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * box_.dim(), static_cast<std::size_t>(box_.dim())};
  }
  const std::vector<double>& coords() const { return coords_; }

  /// Appends the wrapped point; throws ParameterError on a bitwise duplicate.
  void add(std::span<const double> x);
  void add(double x);
  /// Overwrites point i with the wrapped x (no duplicate check; callers on
  /// the sampling path treat coincidences through the energy).
  void set_point(std::size_t i, std::span<const double> x);
  /// Appends the wrapped point without the duplicate scan.
  void append_unchecked(std::span<const double> x);
  void remove(std::size_t i);

 private:
  TorusBox box_;
  std::vector<double> coords_;
};

/// Representative of x in the fundamental domain.
std::vector<double> wrap(const TorusBox& box, std::span<const double> x);
/// wrap(x - y).
std::vector<double> torus_diff(const TorusBox& box, std::span<const double> x, std::span<const double> y);

std::size_t count_in(const Configuration& gamma, const Window& window);
/// Count of points x with wrap(x - u) in the window, i.e. in Δ + u on the torus.
std::size_t count_in_shifted(const Configuration& gamma, const Window& window, std::span<const double> u);

/// N i.i.d. uniform points in `region` (a window of `box`).
Configuration sample_binomial(const TorusBox& box, const Window& region, std::size_t N, Rng& rng);
/// Poisson(intensity·|Δ|) i.i.d. uniform points in Δ.
Configuration sample_poisson(const TorusBox& box, const Window& region, double intensity, Rng& rng);

/// Cells of the perturbed-lattice construction: the first r^d are the unit
/// cubes of the r-cube anchored at the lower corner of Λ_n (r = ⌊n^{1/d}⌋),
/// the rest are the clipped peripheral cubes of the (r+1)-cube.
struct LatticeCell {
  std::vector<double> center;
  std::vector<double> lower;  ///< neighbourhood Δ_j = cell ∩ {|x - center|_∞ <= δ/2}
  std::vector<double> upper;
  bool interior = true;
};

int lattice_root(int n, int d);
std::vector<LatticeCell> perturbed_lattice_cells(const TorusBox& box, double delta);

/// One point uniform in each interior neighbourhood plus n - r^d points in
/// distinct, uniformly chosen peripheral neighbourhoods.
Configuration perturbed_lattice(int n, int d, double delta, Rng& rng);
/// Membership test for C_{δ,n}.
bool in_perturbed_class(const Configuration& gamma, double delta);

Configuration translate_torus(const Configuration& gamma, std::span<const double> u);

}  // namespace riesz
