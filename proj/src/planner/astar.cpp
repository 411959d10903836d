#include "riemcon/planner/astar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdlib>
#include <limits>
#include <queue>

#include "riemcon/errors.hpp"

namespace riemcon::planner {

using mapping::CellState;

double PathCost::value() const { return straight + diagonal * std::numbers::sqrt2; }

bool operator<(const PathCost& a, const PathCost& b) {
  // a.s + a.d r < b.s + b.d r  <=>  x < y r  with x = a.s - b.s, y = b.d - a.d
  const long long x = static_cast<long long>(a.straight) - b.straight;
  const long long y = static_cast<long long>(b.diagonal) - a.diagonal;
  if (y >= 0) return x < 0 || x * x < 2 * y * y;
  if (x >= 0) return false;
  // both negative: -x > -y r
  return x * x > 2 * y * y;
}

PathCost octile(const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
  const int dx = std::abs(a.x() - b.x()), dy = std::abs(a.y() - b.y());
  return {std::max(dx, dy) - std::min(dx, dy), std::min(dx, dy)};
}

namespace {

constexpr int kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

bool isFree(const mapping::OccupancyGrid2D& occ, int x, int y) {
  return occ.contains(x, y) && occ.at(x, y) == CellState::Free;
}

bool canMove(const mapping::OccupancyGrid2D& occ, int x, int y, int dx, int dy) {
  if (!isFree(occ, x + dx, y + dy)) return false;
  if (dx != 0 && dy != 0) return isFree(occ, x + dx, y) && isFree(occ, x, y + dy);
  return true;
}

struct OpenEntry {
  PathCost f;
  long long order;
  int cell;
};

struct OpenGreater {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f < b.f) return false;
    if (b.f < a.f) return true;
    return a.order > b.order;
  }
};

}  // namespace

GridPath astar(const mapping::OccupancyGrid2D& occ, const Eigen::Vector2i& start,
               const Eigen::Vector2i& goal) {
  GridPath out;
  if (!isFree(occ, start.x(), start.y()) || !isFree(occ, goal.x(), goal.y())) return out;
  const int n = static_cast<int>(occ.cells.size());
  std::vector<PathCost> g(n);
  std::vector<std::uint8_t> has_g(n, 0), closed(n, 0);
  std::vector<int> parent(n, -1);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenGreater> open;
  long long order = 0;
  const int s = occ.index(start.x(), start.y());
  const int t = occ.index(goal.x(), goal.y());
  g[s] = {};
  has_g[s] = 1;
  open.push({octile(start, goal), order++, s});
  while (!open.empty()) {
    const OpenEntry e = open.top();
    open.pop();
    if (closed[e.cell]) continue;
    closed[e.cell] = 1;
    if (e.cell == t) break;
    const int x = e.cell % occ.nx, y = e.cell / occ.nx;
    for (const auto& m : kMoves) {
      if (!canMove(occ, x, y, m[0], m[1])) continue;
      const int nb = occ.index(x + m[0], y + m[1]);
      if (closed[nb]) continue;
      const PathCost step = (m[0] != 0 && m[1] != 0) ? PathCost{0, 1} : PathCost{1, 0};
      const PathCost cand = g[e.cell] + step;
      if (!has_g[nb] || cand < g[nb]) {
        g[nb] = cand;
        has_g[nb] = 1;
        parent[nb] = e.cell;
        open.push({cand + octile(Eigen::Vector2i(x + m[0], y + m[1]), goal), order++, nb});
      }
    }
  }
  if (!closed[t]) return out;
  for (int c = t; c != -1; c = parent[c]) out.cells.emplace_back(c % occ.nx, c / occ.nx);
  std::reverse(out.cells.begin(), out.cells.end());
  out.cost = g[t];
  return out;
}

std::vector<std::uint8_t> reachableCells(const mapping::OccupancyGrid2D& occ,
                                         const Eigen::Vector2i& start) {
  std::vector<std::uint8_t> seen(occ.cells.size(), 0);
  if (!isFree(occ, start.x(), start.y())) return seen;
  std::vector<int> stack{occ.index(start.x(), start.y())};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    const int x = c % occ.nx, y = c / occ.nx;
    for (const auto& m : kMoves) {
      if (!canMove(occ, x, y, m[0], m[1])) continue;
      const int nb = occ.index(x + m[0], y + m[1]);
      if (!seen[nb]) {
        seen[nb] = 1;
        stack.push_back(nb);
      }
    }
  }
  return seen;
}

Trajectory astarTrajectory(const mapping::OccupancyGrid2D& occ, const manifold::Pose& start,
                           const std::vector<manifold::Pose>& waypoints) {
  const Eigen::Vector2i s = occ.cellOf(start.translation().head<2>());
  if (!isFree(occ, s.x(), s.y())) throw GeometryError("trajectory start cell is not FREE");
  const auto reach = reachableCells(occ, s);
  Trajectory traj;
  traj.cells.push_back(s);
  Eigen::Vector2i at = s;
  for (const auto& w : waypoints) {
    const Eigen::Vector2d wp = w.translation().head<2>();
    Eigen::Vector2i goal = occ.cellOf(wp);
    bool substituted = false;
    if (!occ.contains(goal.x(), goal.y()) || !reach[occ.index(goal.x(), goal.y())]) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < static_cast<int>(reach.size()); ++c) {
        if (!reach[c]) continue;
        const double d = (occ.center(c % occ.nx, c / occ.nx) - wp).squaredNorm();
        if (d < best) {
          best = d;
          goal = Eigen::Vector2i(c % occ.nx, c / occ.nx);
        }
      }
      substituted = true;
    }
    const GridPath p = astar(occ, at, goal);
    if (p.cells.empty()) throw GeometryError("reachable goal has no path");
    traj.cells.insert(traj.cells.end(), p.cells.begin() + 1, p.cells.end());
    traj.waypoint_index.push_back(static_cast<int>(traj.cells.size()) - 1);
    traj.goals.push_back(goal);
    traj.substituted.push_back(substituted);
    at = goal;
  }
  return traj;
}

}  // namespace riemcon::planner
