#include "riesz/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "riesz/error.hpp"
#include "riesz/sampler.hpp"

namespace riesz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

struct Located {
  std::string where;
};

double to_double(const std::string& v, const Located& at) {
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError(at.where + ": expected a finite number, got '" + v + "'");
  }
  return x;
}

std::int64_t to_int(const std::string& v, const Located& at) {
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError(at.where + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_count(const std::string& v, const Located& at) {
  const std::int64_t x = to_int(v, at);
  if (x < 0) {
    throw ConfigError(at.where + ": expected a nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::uint64_t>(x);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

std::vector<double> to_doubles(const std::string& v, const Located& at) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    out.push_back(to_double(item, at));
  }
  if (out.empty()) {
    throw ConfigError(at.where + ": expected a comma-separated list of numbers");
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const Located&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.d", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.model.d = static_cast<int>(to_int(v, at));
       }},
      {"model.s", [](ExperimentConfig& c, const std::string& v, const Located& at) { c.model.s = to_double(v, at); }},
      {"model.n", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.model.n = static_cast<int>(to_int(v, at));
       }},
      {"model.beta",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.model.beta = to_double(v, at); }},
      {"sampler.steps",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.sampler.steps = to_count(v, at); }},
      {"sampler.burn_in",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.sampler.burn_in = to_count(v, at); }},
      {"sampler.thin",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.sampler.thin = to_count(v, at); }},
      {"sampler.seed",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.sampler.seed = to_count(v, at); }},
      {"sampler.schedule", [](ExperimentConfig& c, const std::string& v, const Located&) { c.sampler.schedule = v; }},
      {"sampler.step_size",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.sampler.step_size = to_double(v, at); }},
      {"sampler.inner_sweeps", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.sampler.inner_sweeps = static_cast<int>(to_int(v, at));
       }},
      {"sampler.every", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.sampler.every = static_cast<int>(to_int(v, at));
       }},
      {"sampler.chains", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.sampler.chains = static_cast<int>(to_int(v, at));
       }},
      {"windows.volumes",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.windows.volumes = to_doubles(v, at); }},
      {"windows.shifts",
       [](ExperimentConfig& c, const std::string& v, const Located& at) { c.windows.shifts = to_doubles(v, at); }},
      {"outputs.directory",
       [](ExperimentConfig& c, const std::string& v, const Located&) { c.outputs.directory = v; }},
      {"outputs.formats",
       [](ExperimentConfig& c, const std::string& v, const Located&) { c.outputs.formats = split_list(v); }},
      {"oracle.points_per_axis", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.oracle.points_per_axis = static_cast<int>(to_int(v, at));
       }},
      {"oracle.panels", [](ExperimentConfig& c, const std::string& v, const Located& at) {
         c.oracle.panels = static_cast<int>(to_int(v, at));
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"model", "sampler", "windows", "outputs", "oracle"};
      bool ok = false;
      for (const char* k : known) {
        ok = ok || section == k;
      }
      if (!ok) {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigError(where + ": key outside of any section");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError(source + ": duplicate key '" + key + "' at lines " + std::to_string(prev->second) +
                        " and " + std::to_string(line_no));
    }
    seen[key] = line_no;
    it->second(cfg, value, Located{where + ": " + key});
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void validate_config(const ExperimentConfig& cfg, bool allow_zero_beta) {
  const auto& m = cfg.model;
  if (m.d < 1) {
    throw ConfigError("model.d: d must be >= 1");
  }
  if (!(m.s > m.d - 1 && m.s < m.d)) {
    std::ostringstream msg;
    msg << "model.s: s must lie in (d-1, d) = (" << m.d - 1 << ", " << m.d << "), got " << m.s;
    throw ConfigError(msg.str());
  }
  if (m.n < 1) {
    throw ConfigError("model.n: n must be >= 1");
  }
  if (allow_zero_beta ? !(m.beta >= 0.0) : !(m.beta > 0.0)) {
    throw ConfigError(allow_zero_beta ? "model.beta: beta must be >= 0" : "model.beta: beta must be > 0");
  }
  if (!cfg.sampler.seed) {
    throw ConfigError("sampler.seed: missing required field 'seed'");
  }
  if (cfg.sampler.thin < 1) {
    throw ConfigError("sampler.thin: thin must be >= 1");
  }
  if (cfg.sampler.burn_in > cfg.sampler.steps) {
    throw ConfigError("sampler.burn_in: burn_in must not exceed steps");
  }
  if (!(cfg.sampler.step_size > 0.0)) {
    throw ConfigError("sampler.step_size: step_size must be > 0");
  }
  if (cfg.sampler.inner_sweeps < 1 || cfg.sampler.every < 1 || cfg.sampler.chains < 1) {
    throw ConfigError("sampler: inner_sweeps, every and chains must be >= 1");
  }
  try {
    (void)schedule_kind_from_string(cfg.sampler.schedule);
  } catch (const std::exception&) {
    throw ConfigError("sampler.schedule: expected plain, dlr or swap, got '" + cfg.sampler.schedule + "'");
  }
  for (double v : cfg.windows.volumes) {
    if (!(v > 0.0) || v > m.n) {
      throw ConfigError("windows.volumes: each volume must lie in (0, n]");
    }
  }
  for (const auto& f : cfg.outputs.formats) {
    if (f != "csv" && f != "jsonl") {
      throw ConfigError("outputs.formats: unknown format '" + f + "' (expected csv, jsonl)");
    }
  }
  if (cfg.oracle.points_per_axis < 2 || cfg.oracle.panels < 1) {
    throw ConfigError("oracle: points_per_axis must be >= 2 and panels >= 1");
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = {{"d", cfg.model.d}, {"s", cfg.model.s}, {"n", cfg.model.n}, {"beta", cfg.model.beta}};
  j["sampler"] = {{"steps", cfg.sampler.steps},
                  {"burn_in", cfg.sampler.burn_in},
                  {"thin", cfg.sampler.thin},
                  {"seed", cfg.sampler.seed ? nlohmann::ordered_json(*cfg.sampler.seed) : nlohmann::ordered_json()},
                  {"schedule", cfg.sampler.schedule},
                  {"step_size", cfg.sampler.step_size},
                  {"inner_sweeps", cfg.sampler.inner_sweeps},
                  {"every", cfg.sampler.every},
                  {"chains", cfg.sampler.chains}};
  j["windows"] = {{"volumes", cfg.windows.volumes}, {"shifts", cfg.windows.shifts}};
  j["outputs"] = {{"directory", cfg.outputs.directory}, {"formats", cfg.outputs.formats}};
  j["oracle"] = {{"points_per_axis", cfg.oracle.points_per_axis}, {"panels", cfg.oracle.panels}};
  return j.dump(2);
}

}  // namespace riesz
