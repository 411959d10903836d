#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "riemcon/manifold/se3.hpp"
#include "riemcon/mapping/semantic_grid.hpp"

namespace riemcon::mapping {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

/// Planar grid aligned with the x/y axes of a GridGeometry.
struct OccupancyGrid2D {
  int nx = 0;
  int ny = 0;
  double cell_size = 0.2;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  std::vector<CellState> cells;

  static OccupancyGrid2D filled(int nx, int ny, double cell_size, const Eigen::Vector2d& origin,
                                CellState state);

  int index(int x, int y) const { return x + nx * y; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < nx && y < ny; }
  CellState at(int x, int y) const { return cells[index(x, y)]; }
  CellState& at(int x, int y) { return cells[index(x, y)]; }
  Eigen::Vector2i cellOf(const Eigen::Vector2d& p) const;
  /// cellOf clamped into the grid.
  Eigen::Vector2i clampedCellOf(const Eigen::Vector2d& p) const;
  Eigen::Vector2d center(int x, int y) const;
  int count(CellState state) const;
};

/// Which ML classes make a column drivable and which block it. Classes in
/// neither set (such as free space) are neutral.
struct TraversabilityClasses {
  std::vector<int> traversable;
  std::vector<int> obstacle;

  /// Obstacles default to every nonzero class that is not traversable.
  static TraversabilityClasses withDefaultObstacles(std::vector<int> traversable,
                                                    int classes_plus_one);
};

/// How a column is projected when its known cells are all neutral (free
/// space seen, ground never seen).
enum class NeutralColumns { Occupied, Unknown };

/// Column rule: FREE when a known cell is traversable and none is an
/// obstacle, UNKNOWN when no cell is known, OCCUPIED otherwise. With
/// NeutralColumns::Unknown a column holding only neutral known cells stays
/// UNKNOWN, which lets exploration revisit ground it has only looked across.
OccupancyGrid2D mlProject2D(const SemanticGrid& map, const TraversabilityClasses& classes,
                            NeutralColumns neutral = NeutralColumns::Occupied);

/// Euclidean distance (meters) from each cell center to the nearest OCCUPIED
/// cell center, clamped to [cell_size / 10, ceiling]. A nonpositive ceiling
/// selects 10 * cell_size * max(nx, ny).
class DistanceField {
 public:
  explicit DistanceField(const OccupancyGrid2D& occ, double ceiling = 0.0);

  double at(int x, int y) const { return d_[x + nx_ * y]; }
  /// Value of the cell containing p, with p clamped into the grid.
  double at(const Eigen::Vector2d& p) const;
  double floorValue() const { return floor_; }
  double ceilingValue() const { return ceiling_; }

 private:
  OccupancyGrid2D geometry_;
  int nx_;
  double floor_;
  double ceiling_;
  std::vector<double> d_;
};

/// One-dimensional squared distance transform of f (lower envelope of
/// parabolas); entries of f may be +infinity.
std::vector<double> squaredDistanceTransform1D(const std::vector<double>& f);

struct FrontierCluster {
  std::vector<int> cells;  ///< 2-D indices, increasing
  int viewpoint_cell = 0;
  double yaw = 0.0;
};

/// FREE cells 4-adjacent to UNKNOWN, grouped into 4-connected components.
std::vector<FrontierCluster> frontierClusters(const OccupancyGrid2D& occ);

struct FrontierPlan {
  std::vector<manifold::Pose> viewpoints;
  bool exploration_complete = false;
};

/// T viewpoints at cluster centers ordered by size (descending) and
/// distance from start (ascending). Missing entries repeat the last one with
/// a quarter turn more yaw each time.
FrontierPlan frontierViewpoints(const OccupancyGrid2D& occ, const manifold::Pose& start, int horizon);

/// Covered area: non-UNKNOWN columns times the cell area.
double coverageArea(const OccupancyGrid2D& occ);

}  // namespace riemcon::mapping
