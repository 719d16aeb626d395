#include "riesz/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/oracle.hpp"

namespace riesz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MeanEstimate summarize(std::span<const double> series) {
  if (series.size() >= 20) {
    return batch_means(series, 20);
  }
  MeanEstimate m;
  m.n_samples = series.size();
  double acc = 0.0;
  for (double v : series) {
    acc += v;
  }
  m.mean = series.empty() ? kNaN : acc / static_cast<double>(series.size());
  m.std_error = kNaN;
  return m;
}

EstimateReport make_report(std::string name, std::span<const double> series, const RunMetadata& meta) {
  const MeanEstimate m = summarize(series);
  EstimateReport r;
  r.name = std::move(name);
  r.value = m.mean;
  r.std_error = m.std_error;
  r.n_samples = series.size();
  r.metadata = meta;
  return r;
}

void require_samples(std::span<const Configuration> samples, const char* what) {
  if (samples.empty()) {
    throw ParameterError(std::string(what) + ": no samples");
  }
}

}  // namespace

std::vector<Configuration> collect_samples(ChainState& state, const ChainOptions& options, bool stationarized,
                                           Rng& translation_rng, ChainDiagnostics* diagnostics) {
  std::vector<Configuration> out;
  const ChainDiagnostics diag = run_chain(state, options, [&](const ChainState& st, std::uint64_t) {
    out.push_back(stationarized ? stationarize(st.config(), translation_rng) : st.config());
  });
  if (diagnostics) {
    *diagnostics = diag;
  }
  return out;
}

std::vector<EstimateReport> intensity_profile(std::span<const Configuration> samples, int cells,
                                              const RunMetadata& meta) {
  require_samples(samples, "intensity_profile");
  if (cells < 1) {
    throw ParameterError("intensity_profile: cells must be >= 1");
  }
  const TorusBox& box = samples[0].box();
  const double L = box.side_length();
  const double cell_volume = box.volume() / cells;
  std::vector<std::vector<double>> series(cells, std::vector<double>(samples.size(), 0.0));
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const Configuration& g = samples[t];
    for (std::size_t i = 0; i < g.size(); ++i) {
      int c = static_cast<int>(std::floor((g.point(i)[0] + 0.5 * L) / L * cells));
      c = std::clamp(c, 0, cells - 1);
      series[c][t] += 1.0 / cell_volume;
    }
  }
  std::vector<EstimateReport> out;
  for (int c = 0; c < cells; ++c) {
    EstimateReport r = make_report("intensity_cell_" + std::to_string(c), series[c], meta);
    r.extra["cell_lower"] = -0.5 * L + L * c / cells;
    r.extra["cell_upper"] = -0.5 * L + L * (c + 1) / cells;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> number_fluctuation(std::span<const Configuration> samples, std::span<const double> ks,
                                               const RunMetadata& meta) {
  require_samples(samples, "number_fluctuation");
  if (samples.size() < 20) {
    throw ParameterError("number_fluctuation: at least 20 samples are needed for batch-means errors");
  }
  const TorusBox& box = samples[0].box();
  std::vector<EstimateReport> out;
  std::vector<double> fit_k;
  std::vector<double> fit_var;
  for (double k : ks) {
    if (!(k > 0.0) || k > box.volume() / 4.0) {
      std::ostringstream msg;
      msg << "number_fluctuation: window volume " << k << " must lie in (0, n/4]";
      throw ParameterError(msg.str());
    }
    const Window w = Window::centered(box.dim(), k);
    std::vector<double> abs_dev(samples.size());
    std::vector<double> sq_dev(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) {
      const double dev = static_cast<double>(count_in(samples[t], w)) - k;
      abs_dev[t] = std::abs(dev);
      sq_dev[t] = dev * dev;
    }
    EstimateReport a = make_report("abs_deviation", abs_dev, meta);
    a.extra["k"] = k;
    EstimateReport v = make_report("variance", sq_dev, meta);
    v.extra["k"] = k;
    if (v.value > 0.0) {
      fit_k.push_back(k);
      fit_var.push_back(v.value);
    }
    out.push_back(std::move(a));
    out.push_back(std::move(v));
  }
  EstimateReport slope;
  slope.name = "variance_slope";
  slope.metadata = meta;
  slope.n_samples = samples.size();
  if (fit_k.size() >= 3) {
    const SlopeFit fit = loglog_slope(fit_k, fit_var);
    slope.value = fit.slope;
    slope.std_error = fit.slope_stderr;
    slope.extra["ci_low"] = fit.ci_low;
    slope.extra["ci_high"] = fit.ci_high;
  } else {
    slope.value = kNaN;
    slope.std_error = kNaN;
    slope.inconclusive = true;
  }
  out.push_back(std::move(slope));
  return out;
}

std::vector<EstimateReport> conditional_number_histogram(std::span<const std::size_t> counts, std::size_t k_max,
                                                         std::size_t min_samples, const RunMetadata& meta) {
  if (counts.empty()) {
    throw ParameterError("conditional_number_histogram: empty count series");
  }
  std::vector<EstimateReport> out;
  const double total = static_cast<double>(counts.size());
  std::vector<double> indicator(counts.size());
  for (std::size_t k = 0; k <= k_max + 1; ++k) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
      const bool in = k <= k_max ? counts[t] == k : counts[t] > k_max;
      indicator[t] = in ? 1.0 : 0.0;
      hits += in ? 1 : 0;
    }
    EstimateReport r = make_report(k <= k_max ? "frequency_" + std::to_string(k) : "overflow", indicator, meta);
    r.value = static_cast<double>(hits) / total;
    r.extra["k"] = static_cast<double>(k);
    r.extra["hits"] = static_cast<double>(hits);
    r.inconclusive = k <= k_max && hits == 0 && counts.size() < min_samples;
    out.push_back(std::move(r));
  }
  return out;
}

EstimateReport local_field_moment(std::span<const Configuration> samples, const PeriodizedPotential& pp,
                                  const RunMetadata& meta) {
  std::vector<double> series;
  series.reserve(samples.size());
  std::size_t guarded = 0;
  const std::vector<double> origin(pp.dim(), 0.0);
  for (const Configuration& g : samples) {
    bool near = false;
    for (std::size_t i = 0; i < g.size() && !near; ++i) {
      double m = 0.0;
      for (double v : g.point(i)) {
        m = std::max(m, std::abs(v));
      }
      near = m < 1e-12;
    }
    if (near) {
      ++guarded;
      continue;
    }
    series.push_back(std::abs(local_field(origin, g, pp)));
  }
  EstimateReport r = make_report("local_field_abs_mean", series, meta);
  r.extra["guarded"] = static_cast<double>(guarded);
  return r;
}

std::vector<EstimateReport> swap_ratio_probe(std::span<const JointCounts> per_shift, std::size_t k, std::size_t l,
                                             std::size_t min_hits, const RunMetadata& meta) {
  std::vector<EstimateReport> out;
  double rmax = -std::numeric_limits<double>::infinity();
  double rmin = std::numeric_limits<double>::infinity();
  bool any_inconclusive = false;
  for (std::size_t u = 0; u < per_shift.size(); ++u) {
    const JointCounts& jc = per_shift[u];
    std::vector<double> a(jc.size());
    std::vector<double> b(jc.size());
    std::size_t ha = 0;
    std::size_t hb = 0;
    for (std::size_t t = 0; t < jc.size(); ++t) {
      a[t] = (jc[t].first == k && jc[t].second == l) ? 1.0 : 0.0;
      b[t] = (jc[t].first == l && jc[t].second == k) ? 1.0 : 0.0;
      ha += a[t] > 0.0 ? 1 : 0;
      hb += b[t] > 0.0 ? 1 : 0;
    }
    EstimateReport r;
    r.name = "swap_ratio_" + std::to_string(u);
    r.metadata = meta;
    r.n_samples = jc.size();
    r.extra["hits_kl"] = static_cast<double>(ha);
    r.extra["hits_lk"] = static_cast<double>(hb);
    r.inconclusive = ha < min_hits || hb < min_hits;
    any_inconclusive = any_inconclusive || r.inconclusive;
    if (hb == 0) {
      r.value = kNaN;
      r.std_error = kNaN;
    } else {
      r.value = static_cast<double>(ha) / static_cast<double>(hb);
      // Delta method on batch means of the two indicator series.
      const std::size_t batches = 20;
      const std::size_t len = jc.size() / batches;
      if (len > 0) {
        std::vector<double> ba(batches);
        std::vector<double> bb(batches);
        double ma = 0.0;
        double mb = 0.0;
        for (std::size_t i = 0; i < batches; ++i) {
          double sa = 0.0;
          double sb = 0.0;
          for (std::size_t j = 0; j < len; ++j) {
            sa += a[i * len + j];
            sb += b[i * len + j];
          }
          ba[i] = sa / static_cast<double>(len);
          bb[i] = sb / static_cast<double>(len);
          ma += ba[i];
          mb += bb[i];
        }
        ma /= batches;
        mb /= batches;
        double vaa = 0.0;
        double vbb = 0.0;
        double vab = 0.0;
        for (std::size_t i = 0; i < batches; ++i) {
          vaa += (ba[i] - ma) * (ba[i] - ma);
          vbb += (bb[i] - mb) * (bb[i] - mb);
          vab += (ba[i] - ma) * (bb[i] - mb);
        }
        const double norm = static_cast<double>(batches - 1) * batches;
        vaa /= norm;
        vbb /= norm;
        vab /= norm;
        const double ratio = ma / mb;
        const double rel = vaa / (ma * ma) + vbb / (mb * mb) - 2.0 * vab / (ma * mb);
        r.std_error = ma > 0.0 ? std::abs(ratio) * std::sqrt(std::max(rel, 0.0)) : kNaN;
      } else {
        r.std_error = kNaN;
      }
      if (!r.inconclusive) {
        rmax = std::max(rmax, r.value);
        rmin = std::min(rmin, r.value);
      }
    }
    out.push_back(std::move(r));
  }
  EstimateReport factor;
  factor.name = "swap_ratio_factor";
  factor.metadata = meta;
  factor.inconclusive = any_inconclusive || !(rmin > 0.0);
  factor.value = factor.inconclusive ? kNaN : rmax / rmin;
  factor.std_error = kNaN;
  out.push_back(std::move(factor));
  return out;
}

std::vector<EstimateReport> compensator_probe(std::span<const Configuration> samples, const RieszParams& params,
                                              double x, std::span<const int> p_list, const RunMetadata& meta) {
  if (params.dim() != 1) {
    throw ParameterError("compensator_probe: d = 1 only");
  }
  const double s = params.s();
  std::vector<std::vector<double>> values(p_list.size(), std::vector<double>(samples.size()));
  for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
    const double a = 0.5 * p_list[ip];
    if (!(std::abs(x) < a)) {
      throw ParameterError("compensator_probe: x must lie inside every Λ_p");
    }
    if (ip > 0 && p_list[ip] <= p_list[ip - 1]) {
      throw ParameterError("compensator_probe: p_list must be increasing");
    }
    const double integral = (std::pow(a + x, 1.0 - s) + std::pow(a - x, 1.0 - s)) / (1.0 - s);
    for (std::size_t t = 0; t < samples.size(); ++t) {
      const Configuration& g = samples[t];
      if (static_cast<double>(p_list[ip]) > g.box().volume() + 1e-9) {
        throw ParameterError("compensator_probe: Λ_p exceeds the sample box");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = g.point(i)[0];
        if (y >= -a && y < a) {
          sum += eval_riesz(params, x - y);
        }
      }
      values[ip][t] = sum - integral;
    }
  }
  std::vector<EstimateReport> out;
  for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
    EstimateReport r = make_report("compensator_p" + std::to_string(p_list[ip]), values[ip], meta);
    r.extra["p"] = p_list[ip];
    double var = 0.0;
    for (double v : values[ip]) {
      var += (v - r.value) * (v - r.value);
    }
    r.extra["variance"] = samples.size() > 1 ? var / static_cast<double>(samples.size() - 1) : kNaN;
    for (std::size_t jp = ip + 1; jp < p_list.size(); ++jp) {
      if (p_list[jp] == 2 * p_list[ip]) {
        double inc = 0.0;
        for (std::size_t t = 0; t < samples.size(); ++t) {
          inc += std::abs(values[jp][t] - values[ip][t]);
        }
        r.extra["increment_next"] = inc / static_cast<double>(samples.size());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

double perturbed_lattice_energy_constant(const PeriodizedPotential& pp, double delta) {
  if (pp.dim() != 1) {
    throw ParameterError("perturbed_lattice_energy_constant: d = 1 only");
  }
  if (!(delta > 0.0 && delta < 0.5)) {
    throw ParameterError("perturbed_lattice_energy_constant: delta must lie in (0, 1/2)");
  }
  const int n = pp.n();
  double total = 0.0;
  double err = 0.0;
  for (int m = 1; m < n; ++m) {
    const std::array<double, 1> lo{m - delta};
    const std::array<double, 1> hi{m + delta};
    const auto a = pp.evaluate(lo);
    const auto b = pp.evaluate(hi);
    total += (n - m) * std::max(a.value, b.value);
    err += (n - m) * std::max(a.error, b.error);
  }
  return (total + err) / n;
}

PartitionBounds partition_bounds(const RieszParams& params, int n, double beta, double delta) {
  if (params.dim() != 1) {
    throw ParameterError("partition_bounds: d = 1 only");
  }
  const PeriodizedPotential pp(params, n);
  PartitionBounds b;
  const QuadratureResult i2 = integrate_g2(params);
  b.stability_constant = -(0.5 + i2.value + i2.error) - pp.epsilon();
  b.lattice_constant = n == 1 ? 0.0 : perturbed_lattice_energy_constant(pp, delta);
  b.log_upper = -beta * b.stability_constant;
  b.log_lower = -beta * b.lattice_constant + (std::lgamma(n + 1.0) + n * std::log(delta / n)) / n;
  return b;
}

std::vector<EstimateReport> free_energy_bounds_check(const RieszParams& params, std::span<const int> n_list,
                                                     double beta, const FreeEnergyOptions& options) {
  if (options.grid_points < 3 || options.grid_points % 2 == 0) {
    throw ParameterError("free_energy_bounds_check: grid_points must be odd and >= 3");
  }
  std::vector<EstimateReport> out;
  for (int n : n_list) {
    const PartitionBounds bounds = partition_bounds(params, n, beta);
    EstimateReport r;
    r.name = "log_partition_per_volume";
    r.metadata = {params.dim(), params.s(), n, beta, options.seed, "plain"};
    r.extra["log_lower"] = bounds.log_lower;
    r.extra["log_upper"] = bounds.log_upper;
    if (n <= 4 || beta == 0.0) {
      const OracleResult z = n <= 4 ? exact_partition(params, n, beta) : OracleResult{1.0, 0.0};
      r.value = std::log(z.value) / n;
      r.std_error = z.tolerance / (z.value * n);
      r.n_samples = 1;
      r.extra["method"] = 0.0;
    } else {
      const int G = options.grid_points;
      const auto pp = std::make_shared<const PeriodizedPotential>(params, n);
      std::vector<double> mean(G);
      std::vector<double> se(G);
      for (int i = 0; i < G; ++i) {
        const double b = beta * i / (G - 1);
        Rng rng(options.seed, static_cast<std::uint64_t>(n) * 1000 + i);
        Configuration start = perturbed_lattice(n, params.dim(), 0.25, rng);
        ChainState state(std::move(start), pp, b, std::move(rng), 1.0);
        ChainOptions co;
        co.n_steps = options.steps;
        co.burn_in = options.burn_in;
        co.thin = options.thin;
        const ChainDiagnostics diag = run_chain(state, co);
        mean[i] = diag.energy_mean;
        se[i] = diag.energy_stderr;
      }
      auto trapezoid = [&](int stride) {
        const double h = beta * stride / (G - 1);
        double v = 0.0;
        double var = 0.0;
        for (int i = 0; i < G; i += stride) {
          const double w = (i == 0 || i == G - 1) ? 0.5 * h : h;
          v += w * mean[i];
          var += w * w * se[i] * se[i];
        }
        return std::make_pair(-v / n, std::sqrt(var) / n);
      };
      const auto fine = trapezoid(1);
      const auto coarse = trapezoid(2);
      r.value = fine.first;
      r.std_error = fine.second;
      r.n_samples = static_cast<std::size_t>(G) * (options.steps - options.burn_in) / options.thin;
      r.extra["coarse"] = coarse.first;
      r.extra["method"] = 1.0;
    }
    const double tol = 3.0 * (std::isfinite(r.std_error) ? r.std_error : 0.0);
    r.extra["inside"] = (r.value >= bounds.log_lower - tol && r.value <= bounds.log_upper + tol) ? 1.0 : 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace riesz
