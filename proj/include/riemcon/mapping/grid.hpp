#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace riemcon::mapping {

/// Axis-aligned voxel lattice. Cell (x, y, z) covers
/// origin + cell_size * [x, x+1) x [y, y+1) x [z, z+1) and has flat index
/// x + nx * (y + ny * z).
struct GridGeometry {
  Eigen::Vector3i dims{1, 1, 1};
  double cell_size = 0.2;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();

  /// Throws GeometryError on nonpositive dims or cell size.
  void validate() const;

  int cellCount() const { return dims.x() * dims.y() * dims.z(); }
  int columnCount() const { return dims.x() * dims.y(); }
  bool contains(const Eigen::Vector3i& c) const {
    return (c.array() >= 0).all() && (c.array() < dims.array()).all();
  }
  int index(const Eigen::Vector3i& c) const { return c.x() + dims.x() * (c.y() + dims.y() * c.z()); }
  int index(int x, int y, int z) const { return x + dims.x() * (y + dims.y() * z); }
  Eigen::Vector3i coords(int index) const;
  /// Cell containing a world point (floor division, may be outside the grid).
  Eigen::Vector3i cellOf(const Eigen::Vector3d& p) const;
  Eigen::Vector3d center(const Eigen::Vector3i& c) const;
  Eigen::Vector3d center(int index) const { return center(coords(index)); }
  Eigen::Vector3d upperCorner() const { return origin + cell_size * dims.cast<double>(); }

  bool operator==(const GridGeometry& o) const {
    return dims == o.dims && cell_size == o.cell_size && origin == o.origin;
  }
};

/// One cell visited by a traversal with the ray parameter at which the
/// segment enters it (0 for the start cell).
struct Traversal {
  int index;
  double t_enter;
};

/// Cells pierced by the segment from a to b, in order, restricted to the
/// grid (3-D DDA). `reached_end` reports whether b itself lies in the grid,
/// in which case the last element is b's cell.
std::vector<Traversal> traverseSegment(const GridGeometry& g, const Eigen::Vector3d& a,
                                       const Eigen::Vector3d& b, bool* reached_end = nullptr);

/// First cell along the ray origin + t * dir, t in [0, max_t], for which
/// `blocked` returns true. Returns the entry parameter t (distance when dir
/// is unit length) and writes the cell index.
std::optional<double> castRay(const GridGeometry& g, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& dir, double max_t,
                              const std::function<bool(int)>& blocked, int* hit_index);

}  // namespace riemcon::mapping
