#include "riemcon/mapping/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riemcon/errors.hpp"

namespace riemcon::mapping {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Amanatides-Woo walk over the cells pierced by a + t d for t in [t_lo, t_hi].
// `visit` returns false to stop early.
void walk(const GridGeometry& g, const Eigen::Vector3d& a, const Eigen::Vector3d& d, double t_lo,
          double t_hi, const std::function<bool(const Eigen::Vector3i&, double)>& visit) {
  const Eigen::Vector3d lo = g.origin;
  const Eigen::Vector3d hi = g.upperCorner();
  double t0 = t_lo, t1 = t_hi;
  for (int k = 0; k < 3; ++k) {
    if (d(k) == 0.0) {
      if (a(k) < lo(k) || a(k) >= hi(k)) return;
      continue;
    }
    double ta = (lo(k) - a(k)) / d(k);
    double tb = (hi(k) - a(k)) / d(k);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return;

  const Eigen::Vector3d p0 = a + t0 * d;
  Eigen::Vector3i cell = g.cellOf(p0);
  for (int k = 0; k < 3; ++k) cell(k) = std::clamp(cell(k), 0, g.dims(k) - 1);

  Eigen::Vector3i step;
  Eigen::Vector3d t_max, t_delta;
  for (int k = 0; k < 3; ++k) {
    if (d(k) > 0.0) {
      step(k) = 1;
      t_max(k) = (lo(k) + (cell(k) + 1) * g.cell_size - a(k)) / d(k);
      t_delta(k) = g.cell_size / d(k);
    } else if (d(k) < 0.0) {
      step(k) = -1;
      t_max(k) = (lo(k) + cell(k) * g.cell_size - a(k)) / d(k);
      t_delta(k) = -g.cell_size / d(k);
    } else {
      step(k) = 0;
      t_max(k) = kInf;
      t_delta(k) = kInf;
    }
  }

  double t_enter = t0;
  const int guard = g.dims.sum() + 3;
  for (int n = 0; n <= guard; ++n) {
    if (!visit(cell, t_enter)) return;
    int axis = 0;
    if (t_max(1) < t_max(axis)) axis = 1;
    if (t_max(2) < t_max(axis)) axis = 2;
    if (t_max(axis) > t1) return;
    t_enter = t_max(axis);
    cell(axis) += step(axis);
    t_max(axis) += t_delta(axis);
    if (!g.contains(cell)) return;
  }
}

}  // namespace

void GridGeometry::validate() const {
  if ((dims.array() <= 0).any()) throw GeometryError("grid dimensions must be positive");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw GeometryError("cell size must be positive and finite");
  if (!origin.allFinite()) throw GeometryError("grid origin must be finite");
}

Eigen::Vector3i GridGeometry::coords(int index) const {
  const int x = index % dims.x();
  const int yz = index / dims.x();
  return Eigen::Vector3i(x, yz % dims.y(), yz / dims.y());
}

Eigen::Vector3i GridGeometry::cellOf(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d r = (p - origin) / cell_size;
  return Eigen::Vector3i(static_cast<int>(std::floor(r.x())), static_cast<int>(std::floor(r.y())),
                         static_cast<int>(std::floor(r.z())));
}

Eigen::Vector3d GridGeometry::center(const Eigen::Vector3i& c) const {
  return origin + cell_size * (c.cast<double>() + Eigen::Vector3d::Constant(0.5));
}

std::vector<Traversal> traverseSegment(const GridGeometry& g, const Eigen::Vector3d& a,
                                       const Eigen::Vector3d& b, bool* reached_end) {
  std::vector<Traversal> out;
  const Eigen::Vector3i end_cell = g.cellOf(b);
  const bool end_inside = g.contains(end_cell);
  if (reached_end) *reached_end = false;
  walk(g, a, b - a, 0.0, 1.0, [&](const Eigen::Vector3i& c, double t) {
    out.push_back({g.index(c), t});
    if (end_inside && c == end_cell) {
      if (reached_end) *reached_end = true;
      return false;
    }
    return true;
  });
  return out;
}

std::optional<double> castRay(const GridGeometry& g, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& dir, double max_t,
                              const std::function<bool(int)>& blocked, int* hit_index) {
  std::optional<double> hit;
  walk(g, origin, dir, 0.0, max_t, [&](const Eigen::Vector3i& c, double t) {
    const int idx = g.index(c);
    if (blocked(idx)) {
      hit = t;
      if (hit_index) *hit_index = idx;
      return false;
    }
    return true;
  });
  return hit;
}

}  // namespace riemcon::mapping
