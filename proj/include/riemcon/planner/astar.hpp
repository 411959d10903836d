#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "riemcon/manifold/se3.hpp"
#include "riemcon/mapping/occupancy.hpp"

namespace riemcon::planner {

/// Exact 8-connected path cost: straight + diagonal * sqrt(2).
struct PathCost {
  int straight = 0;
  int diagonal = 0;

  double value() const;
  bool operator==(const PathCost&) const = default;
  PathCost operator+(const PathCost& o) const { return {straight + o.straight, diagonal + o.diagonal}; }
};

/// Exact comparison of a + b sqrt(2) values using integer arithmetic.
bool operator<(const PathCost& a, const PathCost& b);

/// Octile distance between two cells.
PathCost octile(const Eigen::Vector2i& a, const Eigen::Vector2i& b);

struct GridPath {
  std::vector<Eigen::Vector2i> cells;  ///< includes start and goal
  PathCost cost;
};

/// A* over FREE cells with 8-connectivity. Diagonal moves require both
/// adjacent side cells to be FREE. Ties in f are broken by insertion order.
/// Returns an empty path when the goal cannot be reached.
GridPath astar(const mapping::OccupancyGrid2D& occ, const Eigen::Vector2i& start,
               const Eigen::Vector2i& goal);

/// FREE cells reachable from start, as a flag per cell.
std::vector<std::uint8_t> reachableCells(const mapping::OccupancyGrid2D& occ,
                                         const Eigen::Vector2i& start);

struct Trajectory {
  std::vector<Eigen::Vector2i> cells;  ///< start first, consecutive cells 8-adjacent
  std::vector<int> waypoint_index;     ///< position in `cells` where each waypoint is reached
  std::vector<Eigen::Vector2i> goals;  ///< the cell actually used for each waypoint
  std::vector<bool> substituted;       ///< waypoint replaced by the nearest reachable cell
};

/// Concatenated shortest paths start -> w1 -> ... -> wT. Throws
/// GeometryError when the start cell is not FREE.
Trajectory astarTrajectory(const mapping::OccupancyGrid2D& occ, const manifold::Pose& start,
                           const std::vector<manifold::Pose>& waypoints);

}  // namespace riemcon::planner
