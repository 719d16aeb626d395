#include "riesz/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "riesz/error.hpp"
#include "riesz/summation.hpp"

namespace riesz {

MeanEstimate batch_means(std::span<const double> series, std::size_t batches) {
  if (batches < 20) {
    throw ParameterError("batch_means: at least 20 batches are required");
  }
  if (series.size() < batches) {
    throw ParameterError("batch_means: fewer samples than batches");
  }
  MeanEstimate out;
  out.n_samples = series.size();
  out.batches = batches;
  CompensatedSum total;
  for (double v : series) {
    total += v;
  }
  out.mean = total.value() / static_cast<double>(series.size());
  const std::size_t len = series.size() / batches;
  std::vector<double> means(batches);
  CompensatedSum grand;
  for (std::size_t b = 0; b < batches; ++b) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < len; ++i) {
      acc += series[b * len + i];
    }
    means[b] = acc.value() / static_cast<double>(len);
    grand += means[b];
  }
  const double gm = grand.value() / static_cast<double>(batches);
  double var = 0.0;
  for (double m : means) {
    var += (m - gm) * (m - gm);
  }
  var /= static_cast<double>(batches - 1);
  out.std_error = std::sqrt(var / static_cast<double>(batches));
  return out;
}

double integrated_autocorr_time(std::span<const double> series, double c) {
  const std::size_t n = series.size();
  if (n < 4) {
    return 1.0;
  }
  double mean = 0.0;
  for (double v : series) {
    mean += v;
  }
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) {
    c0 += (v - mean) * (v - mean);
  }
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) {
    return 1.0;
  }
  double tau = 1.0;
  const std::size_t max_lag = n / 2;
  for (std::size_t t = 1; t < max_lag; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) {
      ct += (series[i] - mean) * (series[i + t] - mean);
    }
    ct /= static_cast<double>(n);
    tau += 2.0 * ct / c0;
    if (static_cast<double>(t) >= c * tau) {
      break;
    }
  }
  return std::max(tau, 1e-12);
}

SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) {
    throw ParameterError("loglog_slope: need at least three (x, y) pairs");
  }
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ParameterError("loglog_slope: values must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    sse += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  fit.slope_stderr = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - tq * fit.slope_stderr;
  fit.ci_high = fit.slope + tq * fit.slope_stderr;
  return fit;
}

double chi_square_survival(double statistic, int dof) {
  if (dof < 1) {
    return 1.0;
  }
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

namespace {

// Greedy left-to-right merging until every merged bin reaches the threshold.
std::vector<std::pair<double, double>> merge_bins(std::span<const double> observed, std::span<const double> expected,
                                                  double min_expected) {
  std::vector<std::pair<double, double>> merged;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= min_expected) {
      merged.emplace_back(o, e);
      o = 0.0;
      e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (merged.empty()) {
      merged.emplace_back(o, e);
    } else {
      merged.back().first += o;
      merged.back().second += e;
    }
  }
  return merged;
}

}  // namespace

ChiSquare chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                         double min_expected) {
  if (observed.size() != probabilities.size()) {
    throw ParameterError("chi_square_gof: size mismatch");
  }
  double total = 0.0;
  for (double o : observed) {
    total += o;
  }
  std::vector<double> expected(probabilities.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected[i] = total * probabilities[i];
  }
  const auto merged = merge_bins(observed, expected, min_expected);
  ChiSquare out;
  for (const auto& [o, e] : merged) {
    if (e > 0.0) {
      out.statistic += (o - e) * (o - e) / e;
    }
  }
  out.dof = static_cast<int>(merged.size()) - 1;
  out.p_value = chi_square_survival(out.statistic, out.dof);
  return out;
}

ChiSquare chi_square_homogeneity(std::span<const double> a, std::span<const double> b, double min_expected) {
  if (a.size() != b.size()) {
    throw ParameterError("chi_square_homogeneity: size mismatch");
  }
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i];
    nb += b[i];
  }
  // Merge on the pooled expected counts of the smaller sample.
  std::vector<std::pair<double, double>> bins;
  double ca = 0.0;
  double cb = 0.0;
  const double frac = std::min(na, nb) / (na + nb);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
    if ((ca + cb) * frac >= min_expected) {
      bins.emplace_back(ca, cb);
      ca = 0.0;
      cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(ca, cb);
    } else {
      bins.back().first += ca;
      bins.back().second += cb;
    }
  }
  ChiSquare out;
  const double n = na + nb;
  for (const auto& [x, y] : bins) {
    const double row = x + y;
    const double ea = row * na / n;
    const double eb = row * nb / n;
    if (ea > 0.0) {
      out.statistic += (x - ea) * (x - ea) / ea;
    }
    if (eb > 0.0) {
      out.statistic += (y - eb) * (y - eb) / eb;
    }
  }
  out.dof = static_cast<int>(bins.size()) - 1;
  out.p_value = chi_square_survival(out.statistic, out.dof);
  return out;
}

}  // namespace riesz
