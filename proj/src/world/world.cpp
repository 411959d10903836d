#include "riemcon/world/world.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "riemcon/errors.hpp"

namespace riemcon::world {

namespace {

using nlohmann::json;

struct Line {
  std::string text;
  int number;
};

std::vector<Line> splitLines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string s;
  int n = 0;
  while (std::getline(in, s)) {
    ++n;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    out.push_back({s, n});
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, const std::string& what, int line, int column) {
  throw ParseError(source + ": " + what, line, column);
}

template <typename T>
T field(const json& header, const char* key, const std::string& source, int line) {
  if (!header.contains(key)) fail(source, std::string("header is missing \"") + key + "\"", line, 1);
  try {
    return header.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(source, std::string("header field \"") + key + "\" has the wrong type", line, 1);
  }
}

}  // namespace

GroundTruthWorld::GroundTruthWorld(mapping::GridGeometry geometry,
                                   std::vector<std::string> class_names, std::vector<int> labels)
    : geometry_(std::move(geometry)), class_names_(std::move(class_names)), labels_(std::move(labels)) {
  geometry_.validate();
  if (class_names_.size() < 2) throw GeometryError("a world needs at least two classes");
  if (static_cast<int>(labels_.size()) != geometry_.cellCount())
    throw GeometryError("label count does not match the grid size");
  for (int l : labels_)
    if (l < 0 || l >= classesPlusOne()) throw GeometryError("label outside the class list");
}

int GroundTruthWorld::classId(const std::string& class_name) const {
  for (int c = 0; c < classesPlusOne(); ++c)
    if (class_names_[c] == class_name) return c;
  throw GeometryError("unknown class \"" + class_name + "\"");
}

void GroundTruthWorld::setTraversable(std::vector<int> classes) {
  for (int c : classes)
    if (c <= 0 || c >= classesPlusOne())
      throw GeometryError("traversable classes must be nonzero class ids");
  traversable_ = std::move(classes);
}

GroundTruthWorld parseWorld(const std::string& text, const std::string& source) {
  const auto lines = splitLines(text);
  std::size_t sep = 0;
  while (sep < lines.size() && lines[sep].text != "---") ++sep;
  if (sep == lines.size())
    fail(source, "missing \"---\" after the JSON header", static_cast<int>(lines.size()) + 1, 1);

  std::string header_text;
  for (std::size_t i = 0; i < sep; ++i) header_text += lines[i].text + "\n";
  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column within the header
    const std::size_t pos = e.byte == 0 ? 0 : e.byte - 1;
    int line = 1, column = 1;
    for (std::size_t i = 0; i < pos && i < header_text.size(); ++i) {
      if (header_text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(source, "malformed JSON header", line, column);
  }
  if (!header.is_object()) fail(source, "header must be a JSON object", 1, 1);

  const int hline = 1;
  const auto dims = field<std::vector<int>>(header, "dims", source, hline);
  if (dims.size() != 3 || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    fail(source, "dims must be three positive integers", hline, 1);
  mapping::GridGeometry g;
  g.dims = Eigen::Vector3i(dims[0], dims[1], dims[2]);
  g.cell_size = field<double>(header, "cell_size", source, hline);
  if (!(g.cell_size > 0.0)) fail(source, "cell_size must be positive", hline, 1);
  if (header.contains("origin")) {
    const auto o = field<std::vector<double>>(header, "origin", source, hline);
    if (o.size() != 3) fail(source, "origin must have three entries", hline, 1);
    g.origin = Eigen::Vector3d(o[0], o[1], o[2]);
  }
  const auto classes = field<std::vector<std::string>>(header, "classes", source, hline);
  if (classes.size() < 2) fail(source, "at least two classes are required", hline, 1);
  const auto palette_raw = field<std::map<std::string, std::string>>(header, "palette", source, hline);
  std::map<char, int> palette;
  for (const auto& [ch, cls] : palette_raw) {
    if (ch.size() != 1) fail(source, "palette keys must be single characters", hline, 1);
    int id = -1;
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (classes[c] == cls) id = static_cast<int>(c);
    if (id < 0) fail(source, "palette refers to undeclared class \"" + cls + "\"", hline, 1);
    palette[ch[0]] = id;
  }

  std::vector<int> labels(g.cellCount(), 0);
  std::size_t at = sep + 1;
  for (int z = 0; z < g.dims.z(); ++z) {
    if (z > 0) {
      if (at >= lines.size() || lines[at].text != "---")
        fail(source, "expected \"---\" before slice z=" + std::to_string(z),
             at < lines.size() ? lines[at].number : static_cast<int>(lines.size()) + 1, 1);
      ++at;
    }
    for (int r = 0; r < g.dims.y(); ++r, ++at) {
      if (at >= lines.size())
        fail(source, "slice z=" + std::to_string(z) + " is missing rows",
             static_cast<int>(lines.size()) + 1, 1);
      const Line& ln = lines[at];
      if (static_cast<int>(ln.text.size()) != g.dims.x())
        fail(source,
             "row has " + std::to_string(ln.text.size()) + " characters, expected " +
                 std::to_string(g.dims.x()),
             ln.number, static_cast<int>(std::min<std::size_t>(ln.text.size(), g.dims.x())) + 1);
      const int y = g.dims.y() - 1 - r;
      for (int x = 0; x < g.dims.x(); ++x) {
        const auto it = palette.find(ln.text[x]);
        if (it == palette.end())
          fail(source, std::string("character '") + ln.text[x] + "' is not in the palette",
               ln.number, x + 1);
        labels[g.index(x, y, z)] = it->second;
      }
    }
  }
  while (at < lines.size() && lines[at].text.empty()) ++at;
  if (at < lines.size()) fail(source, "unexpected content after the last slice", lines[at].number, 1);

  GroundTruthWorld world(g, classes, std::move(labels));
  if (header.contains("name")) world.name = field<std::string>(header, "name", source, hline);
  if (header.contains("traversable")) {
    std::vector<int> trav;
    for (const auto& n : field<std::vector<std::string>>(header, "traversable", source, hline)) {
      int id = -1;
      for (std::size_t c = 1; c < classes.size(); ++c)
        if (classes[c] == n) id = static_cast<int>(c);
      if (id < 0) fail(source, "traversable class \"" + n + "\" is not declared", hline, 1);
      trav.push_back(id);
    }
    world.setTraversable(std::move(trav));
  }
  if (header.contains("starts")) {
    std::vector<Eigen::Vector4d> starts;
    for (const auto& s : field<std::vector<std::vector<double>>>(header, "starts", source, hline)) {
      if (s.size() != 4) fail(source, "each start must be [x, y, z, yaw]", hline, 1);
      starts.emplace_back(s[0], s[1], s[2], s[3]);
    }
    world.setStarts(std::move(starts));
  }
  return world;
}

GroundTruthWorld loadWorld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open world file " + path.string(), 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseWorld(ss.str(), path.string());
}

}  // namespace riemcon::world
