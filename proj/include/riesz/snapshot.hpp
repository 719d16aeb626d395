#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riesz/torus.hpp"

namespace riesz {

inline constexpr int kSnapshotSchemaVersion = 1;

/// One newline-delimited JSON record per configuration.
struct SnapshotRecord {
  int schema_version = kSnapshotSchemaVersion;
  std::uint64_t seed = 0;
  int d = 1;
  double s = 0.0;
  int n = 0;
  double beta = 0.0;
  std::vector<std::vector<double>> points;
};

SnapshotRecord make_snapshot(const Configuration& gamma, std::uint64_t seed, double s, double beta);
std::string to_json_line(const SnapshotRecord& record);
SnapshotRecord parse_json_line(const std::string& line);

void write_snapshot(std::ostream& out, const SnapshotRecord& record);
std::vector<SnapshotRecord> read_snapshots(std::istream& in);

/// Rebuilds the configuration on Λ_n; points are re-wrapped.
Configuration to_configuration(const SnapshotRecord& record);

}  // namespace riesz
