#include "riemcon/mapping/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "riemcon/errors.hpp"

namespace riemcon::mapping {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool contains(const std::vector<int>& set, int v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

const int kDx[4] = {1, -1, 0, 0};
const int kDy[4] = {0, 0, 1, -1};

}  // namespace

OccupancyGrid2D OccupancyGrid2D::filled(int nx, int ny, double cell_size,
                                        const Eigen::Vector2d& origin, CellState state) {
  if (nx <= 0 || ny <= 0 || !(cell_size > 0.0))
    throw GeometryError("occupancy grid needs positive size");
  OccupancyGrid2D g;
  g.nx = nx;
  g.ny = ny;
  g.cell_size = cell_size;
  g.origin = origin;
  g.cells.assign(static_cast<std::size_t>(nx) * ny, state);
  return g;
}

Eigen::Vector2i OccupancyGrid2D::cellOf(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d r = (p - origin) / cell_size;
  return Eigen::Vector2i(static_cast<int>(std::floor(r.x())), static_cast<int>(std::floor(r.y())));
}

Eigen::Vector2i OccupancyGrid2D::clampedCellOf(const Eigen::Vector2d& p) const {
  Eigen::Vector2i c = cellOf(p);
  c.x() = std::clamp(c.x(), 0, nx - 1);
  c.y() = std::clamp(c.y(), 0, ny - 1);
  return c;
}

Eigen::Vector2d OccupancyGrid2D::center(int x, int y) const {
  return origin + cell_size * Eigen::Vector2d(x + 0.5, y + 0.5);
}

int OccupancyGrid2D::count(CellState state) const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), state));
}

TraversabilityClasses TraversabilityClasses::withDefaultObstacles(std::vector<int> traversable,
                                                                  int classes_plus_one) {
  TraversabilityClasses t;
  t.traversable = std::move(traversable);
  for (int c = 1; c < classes_plus_one; ++c)
    if (!contains(t.traversable, c)) t.obstacle.push_back(c);
  return t;
}

OccupancyGrid2D mlProject2D(const SemanticGrid& map, const TraversabilityClasses& classes,
                            NeutralColumns neutral) {
  const GridGeometry& g = map.geometry();
  auto occ = OccupancyGrid2D::filled(g.dims.x(), g.dims.y(), g.cell_size, g.origin.head<2>(),
                                     CellState::Unknown);
  for (int y = 0; y < g.dims.y(); ++y) {
    for (int x = 0; x < g.dims.x(); ++x) {
      bool any_known = false, drivable = false, blocked = false;
      for (int z = 0; z < g.dims.z(); ++z) {
        const int n = g.index(x, y, z);
        if (!map.known(n)) continue;
        any_known = true;
        const int c = map.mlClass(n);
        if (contains(classes.traversable, c)) drivable = true;
        if (contains(classes.obstacle, c)) blocked = true;
      }
      if (!any_known) continue;
      if (!drivable && !blocked && neutral == NeutralColumns::Unknown) continue;
      occ.at(x, y) = drivable && !blocked ? CellState::Free : CellState::Occupied;
    }
  }
  return occ;
}

std::vector<double> squaredDistanceTransform1D(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n, kInf);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
  };
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) return d;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
  return d;
}

DistanceField::DistanceField(const OccupancyGrid2D& occ, double ceiling)
    : geometry_(occ), nx_(occ.nx), floor_(occ.cell_size / 10.0) {
  geometry_.cells.clear();
  ceiling_ = ceiling > 0.0 ? ceiling : 10.0 * occ.cell_size * std::max(occ.nx, occ.ny);
  if (ceiling_ < floor_) throw GeometryError("distance ceiling below the floor");
  const int nx = occ.nx, ny = occ.ny;
  std::vector<double> sq(static_cast<std::size_t>(nx) * ny);
  std::vector<double> line;
  for (int x = 0; x < nx; ++x) {
    line.assign(ny, kInf);
    for (int y = 0; y < ny; ++y)
      if (occ.at(x, y) == CellState::Occupied) line[y] = 0.0;
    const auto col = squaredDistanceTransform1D(line);
    for (int y = 0; y < ny; ++y) sq[x + nx * y] = col[y];
  }
  d_.resize(sq.size());
  for (int y = 0; y < ny; ++y) {
    line.assign(sq.begin() + nx * y, sq.begin() + nx * (y + 1));
    const auto row = squaredDistanceTransform1D(line);
    for (int x = 0; x < nx; ++x) {
      const double dist = std::sqrt(row[x]) * occ.cell_size;
      d_[x + nx * y] = std::clamp(std::isfinite(dist) ? dist : ceiling_, floor_, ceiling_);
    }
  }
}

double DistanceField::at(const Eigen::Vector2d& p) const {
  const Eigen::Vector2i c = geometry_.clampedCellOf(p);
  return at(c.x(), c.y());
}

std::vector<FrontierCluster> frontierClusters(const OccupancyGrid2D& occ) {
  const int nx = occ.nx, ny = occ.ny;
  std::vector<std::uint8_t> frontier(occ.cells.size(), 0);
  auto isFrontier = [&](int x, int y) {
    if (occ.at(x, y) != CellState::Free) return false;
    for (int k = 0; k < 4; ++k) {
      const int ax = x + kDx[k], ay = y + kDy[k];
      if (occ.contains(ax, ay) && occ.at(ax, ay) == CellState::Unknown) return true;
    }
    return false;
  };
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) frontier[occ.index(x, y)] = isFrontier(x, y);

  std::vector<FrontierCluster> clusters;
  std::vector<std::uint8_t> seen(occ.cells.size(), 0);
  for (int start = 0; start < static_cast<int>(occ.cells.size()); ++start) {
    if (!frontier[start] || seen[start]) continue;
    FrontierCluster cl;
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      cl.cells.push_back(c);
      const int x = c % nx, y = c / nx;
      for (int k = 0; k < 4; ++k) {
        const int ax = x + kDx[k], ay = y + kDy[k];
        if (!occ.contains(ax, ay)) continue;
        const int a = occ.index(ax, ay);
        if (frontier[a] && !seen[a]) {
          seen[a] = 1;
          stack.push_back(a);
        }
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());

    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    Eigen::Vector2d facing = Eigen::Vector2d::Zero();
    for (int c : cl.cells) {
      const int x = c % nx, y = c / nx;
      centroid += occ.center(x, y);
      for (int k = 0; k < 4; ++k) {
        const int ax = x + kDx[k], ay = y + kDy[k];
        if (occ.contains(ax, ay) && occ.at(ax, ay) == CellState::Unknown)
          facing += Eigen::Vector2d(kDx[k], kDy[k]);
      }
    }
    centroid /= static_cast<double>(cl.cells.size());
    double best = kInf;
    for (int c : cl.cells) {
      const double d = (occ.center(c % nx, c / nx) - centroid).squaredNorm();
      if (d < best) {
        best = d;
        cl.viewpoint_cell = c;
      }
    }
    cl.yaw = facing.squaredNorm() > 0.0 ? std::atan2(facing.y(), facing.x()) : 0.0;
    clusters.push_back(std::move(cl));
  }
  return clusters;
}

FrontierPlan frontierViewpoints(const OccupancyGrid2D& occ, const manifold::Pose& start,
                                int horizon) {
  if (horizon < 1) throw DimensionError("frontier horizon must be at least 1");
  FrontierPlan plan;
  const double z = start.translation().z();
  const Eigen::Vector2d s = start.translation().head<2>();
  auto clusters = frontierClusters(occ);
  if (clusters.empty()) {
    plan.exploration_complete = true;
    double yaw = start.yaw();
    for (int t = 0; t < horizon; ++t) {
      plan.viewpoints.push_back(manifold::Pose::planar(s.x(), s.y(), z, yaw));
      yaw += std::numbers::pi / 2.0;
    }
    return plan;
  }
  auto distance = [&](const FrontierCluster& c) {
    return (occ.center(c.viewpoint_cell % occ.nx, c.viewpoint_cell / occ.nx) - s).norm();
  };
  std::stable_sort(clusters.begin(), clusters.end(),
                   [&](const FrontierCluster& a, const FrontierCluster& b) {
                     const auto ka = std::make_tuple(-static_cast<int>(a.cells.size()), distance(a),
                                                     a.cells.front());
                     const auto kb = std::make_tuple(-static_cast<int>(b.cells.size()), distance(b),
                                                     b.cells.front());
                     return ka < kb;
                   });
  const int used = std::min<int>(horizon, static_cast<int>(clusters.size()));
  for (int t = 0; t < used; ++t) {
    const auto& c = clusters[t];
    const Eigen::Vector2d p = occ.center(c.viewpoint_cell % occ.nx, c.viewpoint_cell / occ.nx);
    plan.viewpoints.push_back(manifold::Pose::planar(p.x(), p.y(), z, c.yaw));
  }
  const Eigen::Vector3d last = plan.viewpoints.back().translation();
  double yaw = clusters[used - 1].yaw;
  for (int t = used; t < horizon; ++t) {
    yaw += std::numbers::pi / 2.0;
    plan.viewpoints.push_back(manifold::Pose::planar(last.x(), last.y(), z, yaw));
  }
  return plan;
}

double coverageArea(const OccupancyGrid2D& occ) {
  const int known = static_cast<int>(occ.cells.size()) - occ.count(CellState::Unknown);
  return known * occ.cell_size * occ.cell_size;
}

}  // namespace riemcon::mapping
