#include "riesz/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "riesz/config.hpp"
#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/estimators.hpp"
#include "riesz/oracle.hpp"
#include "riesz/potential.hpp"
#include "riesz/sampler.hpp"
#include "riesz/snapshot.hpp"
#include "riesz/torus.hpp"

namespace riesz::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// Flags shared by every subcommand; set values override the config file.
struct CommonFlags {
  std::string config_path;
  std::optional<int> d;
  std::optional<double> s;
  std::optional<int> n;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::optional<std::string> schedule;
  std::optional<double> step_size;
  std::optional<int> inner_sweeps;
  std::optional<int> chains;
  std::vector<double> volumes;
  std::vector<double> shifts;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* app, CommonFlags& f, bool sampling) {
  app->add_option("--config", f.config_path, "Config file (sectioned key = value)")->check(CLI::ExistingFile);
  app->add_option("--d", f.d, "Dimension");
  app->add_option("--s", f.s, "Riesz exponent, d-1 < s < d");
  app->add_option("--n", f.n, "Number of points (torus volume)");
  app->add_option("--beta", f.beta, "Inverse temperature");
  app->add_option("--out-dir", f.out_dir, "Output directory (RIESZ_OUTPUT_DIR takes precedence)");
  if (sampling) {
    app->add_option("--seed", f.seed, "Master seed (required)");
    app->add_option("--steps", f.steps, "Total Metropolis steps including burn-in");
    app->add_option("--burn-in", f.burn_in, "Burn-in steps");
    app->add_option("--thin", f.thin, "Thinning interval");
    app->add_option("--schedule", f.schedule, "plain | dlr | swap");
    app->add_option("--step-size", f.step_size, "Initial proposal scale");
    app->add_option("--inner-sweeps", f.inner_sweeps, "Window resampling sweeps");
    app->add_option("--chains", f.chains, "Independent chains");
    app->add_option("--window-volume", f.volumes, "Window volumes")->delimiter(',');
    app->add_option("--shifts", f.shifts, "Swap translations along the first axis")->delimiter(',');
  }
}

ExperimentConfig resolve(const CommonFlags& f, bool need_seed) {
  ExperimentConfig cfg = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (f.d) cfg.model.d = *f.d;
  if (f.s) cfg.model.s = *f.s;
  if (f.n) cfg.model.n = *f.n;
  if (f.beta) cfg.model.beta = *f.beta;
  if (f.seed) cfg.sampler.seed = *f.seed;
  if (f.steps) cfg.sampler.steps = *f.steps;
  if (f.burn_in) cfg.sampler.burn_in = *f.burn_in;
  if (f.thin) cfg.sampler.thin = *f.thin;
  if (f.schedule) cfg.sampler.schedule = *f.schedule;
  if (f.step_size) cfg.sampler.step_size = *f.step_size;
  if (f.inner_sweeps) cfg.sampler.inner_sweeps = *f.inner_sweeps;
  if (f.chains) cfg.sampler.chains = *f.chains;
  if (!f.volumes.empty()) cfg.windows.volumes = f.volumes;
  if (!f.shifts.empty()) cfg.windows.shifts = f.shifts;
  if (f.out_dir) cfg.outputs.directory = *f.out_dir;
  if (!need_seed && !cfg.sampler.seed) {
    cfg.sampler.seed = 0;
  }
  if (!cfg.sampler.seed) {
    throw ConfigError("sampler.seed: missing required field 'seed' (pass --seed or set it in [sampler])");
  }
  validate_config(cfg, f.beta.has_value());
  return cfg;
}

std::filesystem::path output_dir(const ExperimentConfig& cfg) {
  const char* env = std::getenv("RIESZ_OUTPUT_DIR");
  const std::filesystem::path dir =
      (env && *env) ? std::filesystem::path(env) : std::filesystem::path(cfg.outputs.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  for (const auto& f : cfg.outputs.formats) {
    if (f == format) {
      return true;
    }
  }
  return false;
}

// Writes `name` and its metadata sidecar `name.meta.json`.
class Sink {
 public:
  Sink(std::filesystem::path dir, const ExperimentConfig& cfg, std::string subcommand)
      : dir_(std::move(dir)), cfg_(cfg), subcommand_(std::move(subcommand)) {}

  void write(const std::string& name, const std::string& content) const {
    put(dir_ / name, content);
    Json meta;
    meta["artifact"] = kArtifactName;
    meta["version"] = kArtifactVersion;
    meta["subcommand"] = subcommand_;
    meta["file"] = name;
    meta["config"] = Json::parse(config_to_json(cfg_));
    put(dir_ / (name + ".meta.json"), meta.dump(2) + "\n");
  }

 private:
  static void put(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
      throw IoError("write to '" + path.string() + "' failed");
    }
  }

  std::filesystem::path dir_;
  ExperimentConfig cfg_;
  std::string subcommand_;
};

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream out;
  out << "test_id,value,tolerance,status\n";
  for (const auto& r : rows) {
    out << r.test_id << ',' << format_double(r.value) << ',' << format_double(r.tolerance) << ','
        << (r.pass ? "pass" : "FAIL") << '\n';
  }
  return out.str();
}

bool all_pass(const std::vector<VerifyRow>& rows) {
  for (const auto& r : rows) {
    if (!r.pass) {
      return false;
    }
  }
  return true;
}

std::string reports_csv(const std::vector<EstimateReport>& reports) {
  std::ostringstream out;
  out << "name,value,std_error,n_samples,inconclusive,d,s,n,beta,seed,schedule,extra\n";
  for (const auto& r : reports) {
    out << r.name << ',' << format_double(r.value) << ',' << format_double(r.std_error) << ',' << r.n_samples
        << ',' << (r.inconclusive ? 1 : 0) << ',' << r.metadata.d << ',' << format_double(r.metadata.s) << ','
        << r.metadata.n << ',' << format_double(r.metadata.beta) << ',' << r.metadata.seed << ','
        << r.metadata.schedule << ',';
    bool first = true;
    for (const auto& [k, v] : r.extra) {
      out << (first ? "" : ";") << k << '=' << format_double(v);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

Json diagnostics_json(const ChainDiagnostics& d) {
  Json j;
  j["acceptance_rate"] = d.acceptance_rate;
  j["autocorr_time"] = d.autocorr_time;
  j["energy_mean"] = d.energy_mean;
  j["energy_stderr"] = d.energy_stderr;
  j["n_samples"] = d.n_samples;
  j["step_size"] = d.step_size;
  j["max_audit_deviation"] = d.max_audit_deviation;
  j["swaps_accepted"] = d.swaps_accepted;
  j["swaps_proposed"] = d.swaps_proposed;
  return j;
}

RunMetadata metadata(const ExperimentConfig& cfg) {
  return {cfg.model.d, cfg.model.s, cfg.model.n, cfg.model.beta, *cfg.sampler.seed, cfg.sampler.schedule};
}

ChainOptions chain_options(const ExperimentConfig& cfg) {
  const TorusBox box(cfg.model.n, cfg.model.d);
  ChainOptions o;
  o.n_steps = cfg.sampler.steps;
  o.burn_in = cfg.sampler.burn_in;
  o.thin = cfg.sampler.thin;
  o.schedule.kind = schedule_kind_from_string(cfg.sampler.schedule);
  o.schedule.every = cfg.sampler.every;
  o.schedule.inner_sweeps = cfg.sampler.inner_sweeps;
  if (o.schedule.kind != Schedule::Kind::plain) {
    o.schedule.window = Window::centered(cfg.model.d, cfg.windows.volumes.front());
    for (double u : cfg.windows.shifts) {
      std::vector<double> shift(cfg.model.d, 0.0);
      shift[0] = u;
      o.schedule.shifts.push_back(shift);
    }
  }
  return o;
}

// Chain c draws its start from stream 2c and runs on stream 2c + 1.
ChainState make_chain(const ExperimentConfig& cfg, std::shared_ptr<const PeriodizedPotential> pp, int c) {
  Rng init(*cfg.sampler.seed, 2 * static_cast<std::uint64_t>(c));
  Configuration start = perturbed_lattice(cfg.model.n, cfg.model.d, 0.25, init);
  return ChainState(std::move(start), std::move(pp), cfg.model.beta,
                    Rng(*cfg.sampler.seed, 2 * static_cast<std::uint64_t>(c) + 1), cfg.sampler.step_size);
}

std::shared_ptr<const PeriodizedPotential> potential_for(const ExperimentConfig& cfg) {
  return std::make_shared<const PeriodizedPotential>(RieszParams(cfg.model.d, cfg.model.s), cfg.model.n);
}

QuadratureSpec quad_spec(const ExperimentConfig& cfg) {
  return {cfg.oracle.panels, cfg.oracle.points_per_axis, 2};
}

int cmd_sample(const ExperimentConfig& cfg) {
  const auto pp = potential_for(cfg);
  const int chains = cfg.sampler.chains;
  std::vector<std::vector<SnapshotRecord>> snaps(chains);
  std::vector<ChainDiagnostics> diags(chains);
  std::vector<std::exception_ptr> errors(chains);
  const ChainOptions options = chain_options(cfg);
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < chains; ++c) {
    try {
      ChainState state = make_chain(cfg, pp, c);
      diags[c] = run_chain(state, options, [&](const ChainState& st, std::uint64_t) {
        snaps[c].push_back(make_snapshot(st.config(), *cfg.sampler.seed, cfg.model.s, cfg.model.beta));
      });
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  const Sink sink(output_dir(cfg), cfg, "sample");
  if (wants(cfg, "jsonl")) {
    std::ostringstream out;
    for (const auto& chain : snaps) {
      for (const auto& r : chain) {
        write_snapshot(out, r);
      }
    }
    sink.write("samples.jsonl", out.str());
  }
  if (wants(cfg, "csv")) {
    std::ostringstream out;
    out << "chain,sample,energy\n";
    for (int c = 0; c < chains; ++c) {
      for (std::size_t i = 0; i < diags[c].energies.size(); ++i) {
        out << c << ',' << i << ',' << format_double(diags[c].energies[i]) << '\n';
      }
    }
    sink.write("energies.csv", out.str());
  }
  Json summary = diagnostics_json(diags[0]);
  if (chains > 1) {
    summary = Json::object();
    double acc = 0.0;
    double tau = 0.0;
    double mean = 0.0;
    double var = 0.0;
    summary["chains"] = Json::array();
    for (const auto& d : diags) {
      acc += d.acceptance_rate / chains;
      tau += d.autocorr_time / chains;
      mean += d.energy_mean / chains;
      var += d.energy_stderr * d.energy_stderr / (static_cast<double>(chains) * chains);
      summary["chains"].push_back(diagnostics_json(d));
    }
    summary["acceptance_rate"] = acc;
    summary["autocorr_time"] = tau;
    summary["energy_mean"] = mean;
    summary["energy_stderr"] = std::sqrt(var);
  }
  sink.write("diagnostics.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& cfg, bool quick) {
  const auto rows = oracle_suite(RieszParams(cfg.model.d, cfg.model.s), quick, quad_spec(cfg));
  const std::string csv = verify_csv(rows);
  std::cout << csv;
  Sink(output_dir(cfg), cfg, "verify").write("verify.csv", csv);
  return all_pass(rows) ? kExitOk : kExitFailure;
}

int cmd_potential_table(const ExperimentConfig& cfg, int grid) {
  if (grid < 1) {
    throw ConfigError("--grid: must be >= 1");
  }
  const int d = cfg.model.d;
  const RieszParams params(d, cfg.model.s);
  const PeriodizedPotential pp(params, cfg.model.n);
  const double L = pp.side_length();
  std::ostringstream out;
  for (int i = 0; i < d; ++i) {
    out << "x_" << i + 1 << ',';
  }
  out << "g,g_n,abs_diff\n";
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= static_cast<std::size_t>(grid);
  }
  std::vector<double> x(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      x[i] = -0.5 * L + (static_cast<double>(rem % grid) + 0.5) * L / grid;
      rem /= grid;
    }
    const double g = eval_riesz(params, x);
    const double gn = pp(x);
    for (double v : x) {
      out << format_double(v) << ',';
    }
    out << format_double(g) << ',' << format_double(gn) << ',' << format_double(std::abs(gn - g)) << '\n';
  }
  Sink(output_dir(cfg), cfg, "potential-table").write("potential_table.csv", out.str());
  return kExitOk;
}

int cmd_dlr_test(const ExperimentConfig& cfg) {
  const RieszParams params(cfg.model.d, cfg.model.s);
  auto rows = dlr_suite(params, cfg.model.n, cfg.model.beta, quad_spec(cfg));
  const auto gnz = gnz_suite(params, cfg.model.n, cfg.model.beta, quad_spec(cfg));
  rows.insert(rows.end(), gnz.begin(), gnz.end());
  const std::string csv = verify_csv(rows);
  std::cout << csv;
  Sink(output_dir(cfg), cfg, "dlr-test").write("dlr_test.csv", csv);
  return all_pass(rows) ? kExitOk : kExitFailure;
}

int cmd_rigidity(const ExperimentConfig& cfg, std::size_t k_max, std::size_t k, std::size_t l,
                 std::size_t min_hits) {
  ExperimentConfig run = cfg;
  const auto pp = potential_for(run);
  const ChainOptions options = chain_options(run);
  const TorusBox box(run.model.n, run.model.d);
  const Window delta = Window::centered(run.model.d, run.windows.volumes.front());
  std::vector<std::size_t> counts;
  std::vector<JointCounts> joint(run.windows.shifts.size());
  ChainState state = make_chain(run, pp, 0);
  const ChainDiagnostics diag = run_chain(state, options, [&](const ChainState& st, std::uint64_t) {
    const std::size_t here = count_in(st.config(), delta);
    counts.push_back(here);
    for (std::size_t u = 0; u < run.windows.shifts.size(); ++u) {
      std::vector<double> shift(run.model.d, 0.0);
      shift[0] = run.windows.shifts[u];
      joint[u].emplace_back(here, count_in_shifted(st.config(), delta, shift));
    }
  });
  const RunMetadata meta = metadata(run);
  std::vector<EstimateReport> reports = conditional_number_histogram(counts, k_max, 100000, meta);
  const auto ratios = swap_ratio_probe(joint, k, l, min_hits, meta);
  reports.insert(reports.end(), ratios.begin(), ratios.end());
  const Sink sink(output_dir(run), run, "rigidity");
  sink.write("rigidity.csv", reports_csv(reports));
  Json summary = diagnostics_json(diag);
  summary["swap_ratio_factor"] = ratios.back().value;
  summary["swap_ratio_inconclusive"] = ratios.back().inconclusive;
  sink.write("rigidity.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

std::vector<Configuration> stationary_samples(const ExperimentConfig& cfg, ChainDiagnostics& diag) {
  const auto pp = potential_for(cfg);
  ChainState state = make_chain(cfg, pp, 0);
  Rng shift_rng(*cfg.sampler.seed, 1000);
  return collect_samples(state, chain_options(cfg), true, shift_rng, &diag);
}

int cmd_fluctuation(const ExperimentConfig& cfg, int cells) {
  ChainDiagnostics diag;
  const auto samples = stationary_samples(cfg, diag);
  const RunMetadata meta = metadata(cfg);
  std::vector<EstimateReport> reports = number_fluctuation(samples, cfg.windows.volumes, meta);
  const auto profile = intensity_profile(samples, cells, meta);
  reports.insert(reports.end(), profile.begin(), profile.end());
  reports.push_back(local_field_moment(samples, *potential_for(cfg), meta));
  const Sink sink(output_dir(cfg), cfg, "fluctuation");
  sink.write("fluctuation.csv", reports_csv(reports));
  const Json summary = diagnostics_json(diag);
  sink.write("fluctuation.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_freeenergy(const ExperimentConfig& cfg, std::vector<int> n_list, int grid_points) {
  if (n_list.empty()) {
    n_list.push_back(cfg.model.n);
  }
  FreeEnergyOptions o;
  o.grid_points = grid_points;
  o.steps = cfg.sampler.steps;
  o.burn_in = cfg.sampler.burn_in;
  o.thin = cfg.sampler.thin;
  o.seed = *cfg.sampler.seed;
  const auto reports = free_energy_bounds_check(RieszParams(cfg.model.d, cfg.model.s), n_list, cfg.model.beta, o);
  const Sink sink(output_dir(cfg), cfg, "freeenergy");
  sink.write("freeenergy.csv", reports_csv(reports));
  Json summary = Json::array();
  bool ok = true;
  for (const auto& r : reports) {
    summary.push_back({{"n", r.metadata.n},
                       {"log_partition_per_volume", r.value},
                       {"std_error", r.std_error},
                       {"log_lower", r.extra.at("log_lower")},
                       {"log_upper", r.extra.at("log_upper")},
                       {"inside", r.extra.at("inside") > 0.5}});
    ok = ok && r.extra.at("inside") > 0.5;
  }
  sink.write("freeenergy.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return ok ? kExitOk : kExitFailure;
}

int cmd_compensator(const ExperimentConfig& cfg, double x, const std::vector<int>& p_list) {
  ChainDiagnostics diag;
  const auto samples = stationary_samples(cfg, diag);
  const auto reports = compensator_probe(samples, RieszParams(cfg.model.d, cfg.model.s), x, p_list, metadata(cfg));
  const Sink sink(output_dir(cfg), cfg, "probe-compensator");
  sink.write("compensator.csv", reports_csv(reports));
  const Json summary = diagnostics_json(diag);
  sink.write("compensator.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Circular Riesz gas laboratory"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* sample = app.add_subcommand("sample", "Run the canonical MCMC sampler");
  add_common(sample, flags, true);

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  add_common(verify, flags, false);
  verify->add_flag("--quick", quick, "Small n and short reference sums");

  int grid = 64;
  auto* table = app.add_subcommand("potential-table", "Tabulate g and g_n on a grid");
  add_common(table, flags, false);
  table->add_option("--grid", grid, "Points per axis");

  auto* dlr = app.add_subcommand("dlr-test", "Finite-volume DLR and GNZ residuals");
  add_common(dlr, flags, false);

  std::size_t k_max = 7;
  std::size_t k = 1;
  std::size_t l = 2;
  std::size_t min_hits = 100;
  auto* rigidity = app.add_subcommand("rigidity", "Window count histogram and swap ratios");
  add_common(rigidity, flags, true);
  rigidity->add_option("--k-max", k_max, "Largest tabulated count");
  rigidity->add_option("--k", k, "Swap ratio count in the window");
  rigidity->add_option("--l", l, "Swap ratio count in the shifted window");
  rigidity->add_option("--min-hits", min_hits, "Hits needed before a ratio is conclusive");

  int cells = 8;
  auto* fluct = app.add_subcommand("fluctuation", "Number fluctuations, intensity and local field");
  add_common(fluct, flags, true);
  fluct->add_option("--cells", cells, "Intensity profile slabs");

  std::vector<int> n_list;
  int grid_points = 21;
  auto* free = app.add_subcommand("freeenergy", "Free energy against its bounds");
  add_common(free, flags, true);
  free->add_option("--n-list", n_list, "Sizes")->delimiter(',');
  free->add_option("--grid-points", grid_points, "Thermodynamic integration nodes (odd)");

  double x = 0.1;
  std::vector<int> p_list{2, 4, 8};
  auto* comp = app.add_subcommand("probe-compensator", "Compensated window sums S_p(x)");
  add_common(comp, flags, true);
  comp->add_option("--x", x, "Evaluation point");
  comp->add_option("--p-list", p_list, "Window volumes")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample->parsed()) return cmd_sample(resolve(flags, true));
    if (verify->parsed()) return cmd_verify(resolve(flags, false), quick);
    if (table->parsed()) return cmd_potential_table(resolve(flags, false), grid);
    if (dlr->parsed()) return cmd_dlr_test(resolve(flags, false));
    if (rigidity->parsed()) return cmd_rigidity(resolve(flags, true), k_max, k, l, min_hits);
    if (fluct->parsed()) return cmd_fluctuation(resolve(flags, true), cells);
    if (free->parsed()) return cmd_freeenergy(resolve(flags, true), n_list, grid_points);
    if (comp->parsed()) return cmd_compensator(resolve(flags, true), x, p_list);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run(args);
}

// ---------------------------------------------------------------------------
// Oracle suites

namespace {

VerifyRow bounded(std::string id, double value, double tolerance) {
  return {std::move(id), value, tolerance, std::abs(value) <= tolerance};
}

// Residual rows: the reported quadrature spread must itself be below the
// threshold and the residual within it.
VerifyRow residual_row(std::string id, const OracleResult& r, double threshold) {
  return {std::move(id), r.value, threshold, std::abs(r.value) <= threshold && r.tolerance <= threshold};
}

std::string tag(const char* base, int n, double beta) {
  std::ostringstream s;
  s << base << "_n" << n << "_beta" << beta;
  return s.str();
}

}  // namespace

std::vector<VerifyRow> dlr_suite(const RieszParams& params, int n, double beta, const QuadratureSpec& spec) {
  const double L = n;
  const Window delta({-L / 6.0}, {L / 6.0});
  const Window sub({-L / 12.0}, {L / 12.0});
  const std::vector<double> cuts{-L / 6.0, -L / 12.0, L / 12.0, L / 6.0};
  auto in = [](const Window& w, double x) { return w.contains(std::span<const double>(&x, 1)); };

  const ConfigFunctional exterior = [&](std::span<const double> pts, double) {
    std::size_t inside = 0;
    double acc = 0.0;
    for (double x : pts) {
      if (in(delta, x)) {
        ++inside;
      } else {
        acc += std::cos(2.0 * M_PI * x / L);
      }
    }
    return (inside == 1 ? 1.0 : 0.5) * acc;
  };
  const ConfigFunctional subwindow = [&](std::span<const double> pts, double) {
    std::size_t c = 0;
    for (double x : pts) {
      c += in(sub, x) ? 1 : 0;
    }
    return c == 1 ? 1.0 : 0.0;
  };
  const ConfigFunctional smooth = [&](std::span<const double> pts, double) {
    double acc = 0.0;
    for (double x : pts) {
      if (in(delta, x)) {
        acc += std::cos(2.0 * M_PI * x / L);
      }
    }
    return acc;
  };
  std::vector<VerifyRow> rows;
  rows.push_back(residual_row(tag("dlr_exterior", n, beta),
                              dlr_residual(params, n, beta, delta, exterior, spec, spec.doubled(), cuts), 1e-4));
  rows.push_back(residual_row(tag("dlr_subwindow", n, beta),
                              dlr_residual(params, n, beta, delta, subwindow, spec, spec.doubled(), cuts), 1e-4));
  rows.push_back(residual_row(tag("dlr_smooth", n, beta),
                              dlr_residual(params, n, beta, delta, smooth, spec, spec.doubled(), cuts), 1e-4));
  return rows;
}

std::vector<VerifyRow> gnz_suite(const RieszParams& params, int n, double beta, const QuadratureSpec& spec) {
  const double L = n;
  const Window delta({-L / 6.0}, {L / 6.0});
  const std::vector<double> cuts{-L / 6.0, L / 6.0};
  auto in = [&](double x) { return delta.contains(std::span<const double>(&x, 1)); };
  const PointFunctional indicator = [&](double x, std::span<const double> rest) {
    if (!in(x)) {
      return 0.0;
    }
    for (double y : rest) {
      if (in(y)) {
        return 0.0;
      }
    }
    return 1.0;
  };
  const PointFunctional smooth = [&](double x, std::span<const double> rest) {
    double acc = 0.0;
    for (double y : rest) {
      acc += std::cos(2.0 * M_PI * (x - y) / L);
    }
    return std::sin(M_PI * x / L) * std::sin(M_PI * x / L) * (1.0 + acc);
  };
  std::vector<VerifyRow> rows;
  const PointFunctional one = [](double, std::span<const double>) { return 1.0; };
  rows.push_back(
      residual_row(tag("gnz_constant", n, beta), gnz_residual(params, n, beta, one, spec, spec.doubled()), 1e-6));
  rows.push_back(residual_row(tag("gnz_indicator", n, beta),
                              gnz_residual(params, n, beta, indicator, spec, spec.doubled(), cuts), 1e-4));
  rows.push_back(
      residual_row(tag("gnz_smooth", n, beta), gnz_residual(params, n, beta, smooth, spec, spec.doubled()), 1e-4));
  return rows;
}

std::vector<VerifyRow> oracle_suite(const RieszParams& params, bool quick, const QuadratureSpec& spec) {
  std::vector<VerifyRow> rows;
  const int d = params.dim();
  const std::vector<int> sizes = quick ? std::vector<int>{2, 8} : std::vector<int>{2, 8, 32};

  // Periodized potential: symmetry, periodicity and truncation consistency.
  for (int n : sizes) {
    const PeriodizedPotential pp(params, n);
    const PeriodizedPotential wide(params, n, 2 * pp.truncation_radius());
    Rng rng(17, static_cast<std::uint64_t>(n));
    double sym = 0.0;
    double per = 0.0;
    double trunc = 0.0;
    std::vector<double> x(d);
    std::vector<double> y(d);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < d; ++j) {
        x[j] = rng.uniform(-0.5 * n, 0.5 * n);
      }
      const double v = pp(x);
      for (int j = 0; j < d; ++j) {
        y[j] = -x[j];
      }
      sym = std::max(sym, std::abs(pp(y) - v));
      y = x;
      y[0] += pp.side_length();
      per = std::max(per, std::abs(pp(y) - v));
      trunc = std::max(trunc, std::abs(wide(x) - v));
    }
    rows.push_back(bounded("potential_symmetry_n" + std::to_string(n), sym, 2.0 * pp.tail_bound()));
    rows.push_back(bounded("potential_periodicity_n" + std::to_string(n), per, 2.0 * pp.tail_bound()));
    rows.push_back(bounded("potential_truncation_n" + std::to_string(n), trunc, pp.tail_bound() + wide.tail_bound()));
  }
  if (d != 1) {
    return rows;
  }

  // Closed-form constants.
  const QuadratureResult i2 = integrate_g2(params, 1e-10);
  rows.push_back(bounded("integrate_g2_closed_form", i2.value - integrate_g2_closed_form(params),
                         std::max(i2.error, 1e-8)));

  // Against the plain lattice sum.
  const long long K_big = quick ? 100000 : 1000000;
  const int points = quick ? 10 : 100;
  for (int n : sizes) {
    const PeriodizedPotential pp(params, n);
    Rng rng(23, static_cast<std::uint64_t>(n));
    double worst = 0.0;
    double tol = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = rng.uniform(-0.5 * n, 0.5 * n);
      const OracleResult ref = reference_periodized(params, n, x, K_big);
      const double dev = std::abs(pp(x) - ref.value);
      const double lim = pp.tail_bound() + ref.tolerance;
      if (dev / lim >= worst / std::max(tol, 1e-300) || i == 0) {
        worst = dev;
        tol = lim;
      }
    }
    rows.push_back(bounded("potential_reference_n" + std::to_string(n), worst, tol));
    const OracleResult zero = periodized_cell_integral(pp);
    rows.push_back(bounded("potential_zero_mean_n" + std::to_string(n), zero.value,
                           zero.tolerance + n * pp.tail_bound()));
  }

  // Partition function.
  const int max_n = quick ? 3 : 4;
  rows.push_back(bounded("partition_n1", exact_partition(params, 1, 1.0).value - 1.0, 1e-15));
  {
    const OracleResult z0 = exact_partition(params, 3, 0.0);
    rows.push_back(bounded("partition_beta0_n3", z0.value - 1.0, std::max(z0.tolerance, 1e-12)));
  }
  for (int n = 1; n <= max_n; ++n) {
    const OracleResult z = exact_partition(params, n, 1.0, spec);
    const PartitionBounds b = partition_bounds(params, n, 1.0);
    const double logz = std::log(z.value) / n;
    const double slack = z.tolerance / (z.value * n);
    const double excess = std::max(b.log_lower - logz, logz - b.log_upper);
    rows.push_back({"partition_bracket_n" + std::to_string(n), logz, slack, excess <= slack});
  }

  // Expectations.
  {
    const OracleResult one = exact_expectation([](std::span<const double>, double) { return 1.0; }, params, 3, 1.0);
    rows.push_back(bounded("expectation_constant_n3", one.value - 1.0, std::max(one.tolerance, 1e-12)));
    const double L = 3.0;
    const Window delta({-L / 6.0}, {L / 6.0});
    const std::vector<double> cuts{-L / 6.0, L / 6.0};
    const OracleResult count = exact_expectation(
        [&](std::span<const double> pts, double) {
          return static_cast<double>(
              std::count_if(pts.begin(), pts.end(), [&](double x) { return delta.contains(std::span<const double>(&x, 1)); }));
        },
        params, 3, 0.0, {}, cuts);
    rows.push_back(bounded("expectation_count_beta0_n3", count.value - delta.volume(), std::max(count.tolerance, 1e-12)));
  }

  // DLR and GNZ.
  const std::vector<int> dlr_sizes = quick ? std::vector<int>{2} : std::vector<int>{2, 3};
  for (int n : dlr_sizes) {
    for (double beta : {0.0, 1.0}) {
      for (const auto& part : {dlr_suite(params, n, beta, spec), gnz_suite(params, n, beta, spec)}) {
        rows.insert(rows.end(), part.begin(), part.end());
      }
    }
  }
  if (quick) {
    for (const auto& part : {dlr_suite(params, 3, 1.0, spec), gnz_suite(params, 3, 1.0, spec)}) {
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }

  // Metropolis kernel.
  {
    const PeriodizedPotential pp(params, 2);
    rows.push_back(bounded("detailed_balance_n2", detailed_balance_violation(pp, 1.0, 24, 3), 1e-12));
  }
  return rows;
}

}  // namespace riesz::cli
