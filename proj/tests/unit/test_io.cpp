#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riesz/cli.hpp"
#include "riesz/config.hpp"
#include "riesz/error.hpp"
#include "riesz/rng.hpp"
#include "riesz/snapshot.hpp"

using namespace riesz;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("riesz_unit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config loads") {
  const auto cfg = parse_config("[model]\nd = 1\ns = 0.5\nn = 8\nbeta = 1\n[sampler]\nseed = 42\n");
  CHECK(cfg.model.n == 8);
  CHECK(*cfg.sampler.seed == 42);
}

TEST_CASE("config validation and strict parsing") {
  CHECK_THROWS_WITH_AS(parse_config("[model]\ns = 1.5\n[sampler]\nseed = 1\n"),
                       doctest::Contains("s must lie in (d-1, d)"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[model]\nn = 8\n"), doctest::Contains("seed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[model]\nn = 8\n[sampler]\nseed = 1\n[model]\nn = 9\n"),
                       doctest::Contains("lines 2 and 6"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[model]\nsteps = 8\n"), doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[model]\nbeta = 0\n[sampler]\nseed = 1\n"), doctest::Contains("beta"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[modle]\n"), doctest::Contains("unknown section"), ConfigError);
}

TEST_CASE("snapshot round trip") {
  Rng rng(3, 0);
  const Configuration g = perturbed_lattice(9, 2, 0.3, rng);
  const SnapshotRecord r = make_snapshot(g, 3, 1.5, 2.0);
  const std::string line = to_json_line(r);
  const SnapshotRecord back = parse_json_line(line);
  CHECK(back.points == r.points);
  CHECK(to_configuration(back).coords() == g.coords());
  CHECK(to_json_line(back) == line);
  CHECK_THROWS_AS(parse_json_line("{\"schema_version\": 7}"), ConfigError);
}

TEST_CASE("cli exit codes") {
  CHECK(cli::run({"sample", "--no-such-flag"}) == cli::kExitUsage);
  CHECK(cli::run({"sample", "--n", "4", "--out-dir", scratch("noseed").string()}) == cli::kExitUsage);
  CHECK(cli::run({"potential-table", "--s", "1.5", "--out-dir", scratch("bad").string()}) == cli::kExitUsage);
  CHECK(cli::run({}) == cli::kExitUsage);
}

TEST_CASE("cli outputs are byte-identical across runs and carry sidecars") {
  const auto a = scratch("a");
  const auto b = scratch("b");
  for (const auto& dir : {a, b}) {
    CHECK(cli::run({"sample", "--n", "6", "--seed", "11", "--steps", "3000", "--burn-in", "1000", "--thin", "20",
                    "--out-dir", dir.string()}) == cli::kExitOk);
  }
  CHECK(slurp(a / "energies.csv") == slurp(b / "energies.csv"));
  CHECK(slurp(a / "samples.jsonl") == slurp(b / "samples.jsonl"));
  CHECK(std::filesystem::exists(a / "energies.csv.meta.json"));
  CHECK(slurp(a / "energies.csv").rfind("chain,sample,energy\n", 0) == 0);
}

TEST_CASE("potential table") {
  const auto dir = scratch("table");
  CHECK(cli::run({"potential-table", "--s", "0.5", "--n", "4", "--grid", "8", "--out-dir", dir.string()}) ==
        cli::kExitOk);
  std::istringstream in(slurp(dir / "potential_table.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "x_1,g,g_n,abs_diff");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("17 significant digits") {
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(cli::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
