#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riesz {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t batches = 0;
};

/// Batch-means estimate of the mean and its standard error. Uses `batches`
/// contiguous batches (at least 20); a trailing remainder is dropped from the
/// error estimate but kept in the mean.
MeanEstimate batch_means(std::span<const double> series, std::size_t batches = 20);

/// Integrated autocorrelation time 1 + 2 Σ ρ(t) with Sokal's automatic
/// window (smallest W with W >= c τ(W)).
double integrated_autocorr_time(std::span<const double> series, double c = 5.0);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double ci_low = 0.0;   ///< 95% interval from the t distribution
  double ci_high = 0.0;
};

/// Least-squares fit of log y = a + b log x.
SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of counts against expected probabilities. Bins
/// with expected count below `min_expected` are merged into neighbours.
ChiSquare chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                         double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on count tables with equal bins.
ChiSquare chi_square_homogeneity(std::span<const double> a, std::span<const double> b, double min_expected = 5.0);

double chi_square_survival(double statistic, int dof);

}  // namespace riesz
