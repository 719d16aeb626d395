#include "riesz/snapshot.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "riesz/error.hpp"

namespace riesz {

SnapshotRecord make_snapshot(const Configuration& gamma, std::uint64_t seed, double s, double beta) {
  SnapshotRecord r;
  r.seed = seed;
  r.d = gamma.dim();
  r.s = s;
  r.n = gamma.box().n();
  r.beta = beta;
  r.points.reserve(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto p = gamma.point(i);
    r.points.emplace_back(p.begin(), p.end());
  }
  return r;
}

std::string to_json_line(const SnapshotRecord& record) {
  nlohmann::ordered_json j;
  j["schema_version"] = record.schema_version;
  j["seed"] = record.seed;
  j["d"] = record.d;
  j["s"] = record.s;
  j["n"] = record.n;
  j["beta"] = record.beta;
  j["points"] = record.points;
  return j.dump();
}

SnapshotRecord parse_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("snapshot: malformed record: ") + e.what());
  }
  SnapshotRecord r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSnapshotSchemaVersion) {
      throw ConfigError("snapshot: unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.seed = j.at("seed").get<std::uint64_t>();
    r.d = j.at("d").get<int>();
    r.s = j.at("s").get<double>();
    r.n = j.at("n").get<int>();
    r.beta = j.at("beta").get<double>();
    r.points = j.at("points").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("snapshot: ") + e.what());
  }
  for (const auto& p : r.points) {
    if (static_cast<int>(p.size()) != r.d) {
      throw ConfigError("snapshot: point of dimension " + std::to_string(p.size()) + " in a d = " +
                        std::to_string(r.d) + " record");
    }
  }
  return r;
}

void write_snapshot(std::ostream& out, const SnapshotRecord& record) { out << to_json_line(record) << '\n'; }

std::vector<SnapshotRecord> read_snapshots(std::istream& in) {
  std::vector<SnapshotRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      out.push_back(parse_json_line(line));
    }
  }
  return out;
}

Configuration to_configuration(const SnapshotRecord& record) {
  Configuration c{TorusBox(record.n, record.d)};
  for (const auto& p : record.points) {
    c.add(p);
  }
  return c;
}

}  // namespace riesz
