#include "riemcon/expcli/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "riemcon/errors.hpp"
#include "riemcon/netsim/wire.hpp"

namespace riemcon::expcli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parseDouble(const std::string& s, int line, int column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError("bad number '" + s + "'", line, column);
  return v;
}

std::uint64_t parseUnsigned(const std::string& s, int line, int column) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || s.front() == '-')
    throw ParseError("bad integer '" + s + "'", line, column);
  return v;
}

}  // namespace

void writeMetricsCsv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  for (std::size_t k = 1; k < records.size(); ++k)
    if (std::tie(records[k].tick, records[k].robot) <= std::tie(records[k - 1].tick, records[k - 1].robot))
      throw DimensionError("metrics records must be sorted by (tick, robot)");
  out << kMetricsHeader << '\n';
  for (const auto& r : records)
    out << r.tick << ',' << r.robot << ',' << fmt(r.coverage_m2) << ',' << fmt(r.h_norm) << ','
        << fmt(r.phi_map) << ',' << fmt(r.phi_plan) << ',' << r.bytes_tx << ',' << r.bytes_rx << ','
        << fmt(r.distance_m) << '\n';
}

std::vector<MetricsRecord> readMetricsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1, 1);
  if (line != kMetricsHeader) throw ParseError("unexpected header '" + line + "'", 1, 1);
  std::vector<MetricsRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::vector<int> col;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      col.push_back(static_cast<int>(start) + 1);
      f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 9) throw ParseError("expected 9 fields", line_no, 1);
    MetricsRecord r;
    r.tick = static_cast<int>(parseUnsigned(f[0], line_no, col[0]));
    r.robot = static_cast<int>(parseUnsigned(f[1], line_no, col[1]));
    r.coverage_m2 = parseDouble(f[2], line_no, col[2]);
    r.h_norm = parseDouble(f[3], line_no, col[3]);
    r.phi_map = parseDouble(f[4], line_no, col[4]);
    r.phi_plan = parseDouble(f[5], line_no, col[5]);
    r.bytes_tx = parseUnsigned(f[6], line_no, col[6]);
    r.bytes_rx = parseUnsigned(f[7], line_no, col[7]);
    r.distance_m = parseDouble(f[8], line_no, col[8]);
    out.push_back(r);
  }
  return out;
}

void writeMapSnapshot(std::ostream& out, const mapping::SemanticGrid& map, int robot,
                      const std::vector<std::string>& class_names) {
  const auto& g = map.geometry();
  std::vector<int> all(map.cellCount());
  std::iota(all.begin(), all.end(), 0);
  const netsim::Bytes payload = netsim::serializeMap(map.toMessage(all));
  nlohmann::json header = {{"robot", robot},
                           {"dims", {g.dims.x(), g.dims.y(), g.dims.z()}},
                           {"cell_size", g.cell_size},
                           {"origin", {g.origin.x(), g.origin.y(), g.origin.z()}},
                           {"classes", class_names},
                           {"known", map.knownCells()},
                           {"payload_bytes", payload.size()}};
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
}

MapSnapshot readMapSnapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing snapshot header", 1, 1);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad snapshot header: ") + e.what(), 1, 1);
  }
  netsim::Bytes payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    mapping::GridGeometry g;
    const auto dims = h.at("dims").get<std::vector<int>>();
    const auto origin = h.at("origin").get<std::vector<double>>();
    if (dims.size() != 3 || origin.size() != 3) throw ParseError("bad geometry", 1, 1);
    g.dims = {dims[0], dims[1], dims[2]};
    g.origin = {origin[0], origin[1], origin[2]};
    g.cell_size = h.at("cell_size").get<double>();
    if (payload.size() != h.at("payload_bytes").get<std::size_t>())
      throw ParseError("snapshot payload is truncated", 2, 1);
    const auto message = netsim::deserializeMap(payload);
    mapping::SemanticGrid map(g, message.classes_plus_one);
    for (const auto& c : message.cells) map.setH(static_cast<int>(c.index), c.log_odds);
    for (int c : h.at("known").get<std::vector<int>>()) map.markKnown(c);
    MapSnapshot s{h.at("robot").get<int>(), h.at("classes").get<std::vector<std::string>>(),
                  std::move(map)};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad snapshot header: ") + e.what(), 1, 1);
  }
}

}  // namespace riemcon::expcli
