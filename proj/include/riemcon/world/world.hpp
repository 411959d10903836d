#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "riemcon/mapping/grid.hpp"

namespace riemcon::world {

/// Ground-truth semantic voxel world. Label 0 is free space.
///
/// Text format: a JSON header, a line containing only `---`, then one ASCII
/// slice per z level (z = 0 first) separated by `---` lines. Each slice has
/// ny rows of nx characters; the first row is the largest y, so the slice
/// reads like a map with +y up. Characters are translated to class ids
/// through the header's palette.
///
/// Header keys: dims [nx, ny, nz], cell_size, origin [x, y, z] (optional),
/// classes (names, index = id, entry 0 is free space), palette (character
/// to class name), traversable (class names), starts (optional list of
/// [x, y, z, yaw]).
class GroundTruthWorld {
 public:
  GroundTruthWorld(mapping::GridGeometry geometry, std::vector<std::string> class_names,
                   std::vector<int> labels);

  const mapping::GridGeometry& geometry() const { return geometry_; }
  int classesPlusOne() const { return static_cast<int>(class_names_.size()); }
  const std::vector<std::string>& classNames() const { return class_names_; }
  int classId(const std::string& name) const;

  int label(int cell) const { return labels_[cell]; }
  int label(int x, int y, int z) const { return labels_[geometry_.index(x, y, z)]; }
  const std::vector<int>& labels() const { return labels_; }

  const std::vector<int>& traversable() const { return traversable_; }
  void setTraversable(std::vector<int> classes);
  const std::vector<Eigen::Vector4d>& starts() const { return starts_; }
  void setStarts(std::vector<Eigen::Vector4d> starts) { starts_ = std::move(starts); }
  std::string name;

 private:
  mapping::GridGeometry geometry_;
  std::vector<std::string> class_names_;
  std::vector<int> labels_;
  std::vector<int> traversable_;
  std::vector<Eigen::Vector4d> starts_;
};

/// Parses the text format. `source` names the input in error messages.
/// Throws ParseError with the 1-based line and column of the problem.
GroundTruthWorld parseWorld(const std::string& text, const std::string& source = "<string>");
GroundTruthWorld loadWorld(const std::filesystem::path& path);

}  // namespace riemcon::world
