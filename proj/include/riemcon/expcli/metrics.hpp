#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riemcon/mapping/semantic_grid.hpp"

namespace riemcon::expcli {

inline constexpr const char* kMetricsHeader =
    "tick,robot,coverage_m2,h_norm,phi_map,phi_plan,bytes_tx,bytes_rx,distance_m";

/// One row per robot per tick. Byte counters and distance are cumulative.
struct MetricsRecord {
  int tick = 0;
  int robot = 0;
  double coverage_m2 = 0.0;
  double h_norm = 0.0;
  double phi_map = 0.0;
  double phi_plan = 0.0;
  std::uint64_t bytes_tx = 0;
  std::uint64_t bytes_rx = 0;
  double distance_m = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

/// Writes the header and one line per record with 9 significant digits.
/// Throws DimensionError unless records are sorted by (tick, robot).
void writeMetricsCsv(std::ostream& out, const std::vector<MetricsRecord>& records);

/// Inverse of writeMetricsCsv. Throws ParseError on a header mismatch or a
/// malformed line.
std::vector<MetricsRecord> readMetricsCsv(std::istream& in);

/// Final map snapshot: one JSON header line followed by an RMAP payload that
/// holds every cell.
void writeMapSnapshot(std::ostream& out, const mapping::SemanticGrid& map, int robot,
                      const std::vector<std::string>& class_names);

struct MapSnapshot {
  int robot = 0;
  std::vector<std::string> class_names;
  mapping::SemanticGrid map;
};

MapSnapshot readMapSnapshot(std::istream& in);

}  // namespace riemcon::expcli
