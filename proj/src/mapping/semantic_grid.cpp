#include "riemcon/mapping/semantic_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::mapping {

namespace {

// Hit ranges are measured to the entry face of the hit cell. Pushing the
// endpoint a hair along the ray attributes it to the cell behind that face
// for rays travelling in either direction.
constexpr double kEndpointNudge = 1e-6;

}  // namespace

SemanticGrid::SemanticGrid(GridGeometry geometry, int classes_plus_one, double alpha_scale)
    : geometry_(std::move(geometry)), alpha_scale_(alpha_scale) {
  geometry_.validate();
  if (classes_plus_one < 2) throw DimensionError("a semantic map needs at least two classes");
  if (!(alpha_scale >= 0.0) || !std::isfinite(alpha_scale))
    throw ScheduleError("map step scale must be finite and nonnegative");
  const int n = geometry_.cellCount();
  h_ = Eigen::MatrixXd::Zero(classes_plus_one, n);
  log_q_sum_ = Eigen::MatrixXd::Zero(classes_plus_one, n);
  obs_count_.assign(n, 0);
  update_count_.assign(n, 0);
  known_.assign(n, 0);
  changed_.assign(n, 0);
}

void SemanticGrid::checkCell(int cell) const {
  if (cell < 0 || cell >= cellCount())
    throw DimensionError("cell index " + std::to_string(cell) + " outside the grid");
}

void SemanticGrid::setH(int cell, const Eigen::VectorXd& h) {
  checkCell(cell);
  if (h.size() != classesPlusOne())
    throw DimensionError("log-odds vector has length " + std::to_string(h.size()) + ", expected " +
                         std::to_string(classesPlusOne()));
  if (!h.allFinite()) throw ManifoldConstraintError("log-odds must be finite");
  if (h(0) != 0.0) throw ManifoldConstraintError("log-odds of the free class must be 0");
  if (h_.col(cell) != h) {
    h_.col(cell) = h;
    touch(cell);
  }
}

Eigen::VectorXd SemanticGrid::logQ(int cell) const {
  const int t = obs_count_[cell];
  if (t == 0) return Eigen::VectorXd::Zero(classesPlusOne());
  if (!normalize_evidence_) return log_q_sum_.col(cell);
  return log_q_sum_.col(cell) / t;
}

void SemanticGrid::accumulate(int cell, const Eigen::VectorXd& log_likelihood) {
  checkCell(cell);
  if (log_likelihood.size() != classesPlusOne())
    throw DimensionError("log-likelihood has the wrong number of classes");
  log_q_sum_.col(cell) += log_likelihood;
  ++obs_count_[cell];
  known_[cell] = 1;
}

void SemanticGrid::localStep(int cell) {
  checkCell(cell);
  const double alpha = alpha_scale_ / (update_count_[cell] + 1);
  ++update_count_[cell];
  Eigen::VectorXd h = h_.col(cell);
  h += alpha * mapLocalGradient(h, logQ(cell));
  h(0) = 0.0;
  if (h_.col(cell) != h) {
    h_.col(cell) = h;
    touch(cell);
  }
}

void SemanticGrid::localSteps(const std::vector<int>& cells) {
  for (int c : cells) localStep(c);
}

std::vector<int> SemanticGrid::consensusStep(
    const std::vector<std::pair<double, const SemanticGrid*>>& neighbors, double eps) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(h_.rows(), h_.cols());
  for (const auto& [w, other] : neighbors) {
    if (!(other->geometry() == geometry_) || other->classesPlusOne() != classesPlusOne())
      throw GeometryError("neighbor map has a different geometry or class count");
    acc += w * (other->h_ - h_);
  }
  const Eigen::MatrixXd next = h_ + eps * acc;
  std::vector<int> changed;
  for (int n = 0; n < cellCount(); ++n) {
    for (const auto& nb : neighbors)
      if (nb.second->known_[n]) known_[n] = 1;
    if (next.col(n) != h_.col(n)) {
      h_.col(n) = next.col(n);
      touch(n);
      changed.push_back(n);
    }
  }
  return changed;
}

std::vector<int> SemanticGrid::cellsChangedAfter(std::uint64_t stamp) const {
  std::vector<int> out;
  for (int n = 0; n < cellCount(); ++n)
    if (changed_[n] > stamp) out.push_back(n);
  return out;
}

std::vector<int> SemanticGrid::knownCells() const {
  std::vector<int> out;
  for (int n = 0; n < cellCount(); ++n)
    if (known_[n]) out.push_back(n);
  return out;
}

netsim::MapMessage SemanticGrid::toMessage(const std::vector<int>& cells) const {
  netsim::MapMessage m;
  m.classes_plus_one = classesPlusOne();
  m.cells.reserve(cells.size());
  for (int c : cells) {
    checkCell(c);
    m.cells.push_back({static_cast<std::uint32_t>(c), h_.col(c)});
  }
  return m;
}

std::vector<int> SemanticGrid::applyMessage(const netsim::MapMessage& message) {
  if (message.classes_plus_one != classesPlusOne())
    throw DimensionError("map message has " + std::to_string(message.classes_plus_one) +
                         " classes, expected " + std::to_string(classesPlusOne()));
  std::vector<int> out;
  out.reserve(message.cells.size());
  for (const auto& cell : message.cells) {
    const int idx = static_cast<int>(cell.index);
    setH(idx, cell.log_odds);
    known_[idx] = 1;
    out.push_back(idx);
  }
  return out;
}

std::vector<int> integratePointCloud(SemanticGrid& map, const manifold::Pose& sensor_pose,
                                     const std::vector<SemanticRay>& cloud,
                                     const InverseModelParams& params) {
  const int cp1 = map.classesPlusOne();
  params.validate(cp1);
  if (!sensor_pose.matrix().allFinite()) throw ManifoldConstraintError("sensor pose is not finite");
  const Eigen::VectorXd free_ll = freeLogLikelihood(params, cp1);
  const GridGeometry& g = map.geometry();
  const Eigen::Vector3d a = sensor_pose.translation();
  std::vector<int> touched;
  for (const auto& ray : cloud) {
    if (!(ray.range >= 0.0) || !std::isfinite(ray.range))
      throw DimensionError("ray range must be finite and nonnegative");
    const double norm = ray.direction.norm();
    if (!(norm > 0.0)) throw DimensionError("ray direction must be nonzero");
    const double length = ray.max_range ? ray.range : ray.range + kEndpointNudge * g.cell_size;
    const Eigen::Vector3d b = a + sensor_pose.rotation() * (ray.direction / norm) * length;
    bool reached = false;
    const auto cells = traverseSegment(g, a, b, &reached);
    const bool hit = reached && !ray.max_range;
    const std::size_t n_free = hit ? cells.size() - 1 : cells.size();
    for (std::size_t k = 0; k < n_free; ++k) {
      map.accumulate(cells[k].index, free_ll);
      touched.push_back(cells[k].index);
    }
    if (hit) {
      map.accumulate(cells.back().index, hitLogLikelihood(params, cp1, ray.category));
      touched.push_back(cells.back().index);
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  map.localSteps(touched);
  return touched;
}

double mapDiscrepancy(const std::vector<const SemanticGrid*>& maps,
                      const consensus::CommGraph& graph) {
  if (static_cast<int>(maps.size()) != graph.size())
    throw DimensionError("one map per agent is required");
  for (const auto* m : maps)
    if (!(m->geometry() == maps.front()->geometry()) ||
        m->classesPlusOne() != maps.front()->classesPlusOne())
      throw GeometryError("maps have different geometries");
  double total = 0.0;
  for (const auto& [i, j] : graph.edges())
    total += graph.weight(i, j) *
             (maps[j]->logOddsMatrix() - maps[i]->logOddsMatrix()).squaredNorm();
  return total;
}

double normalizedEntropy(const SemanticGrid& map) {
  double total = 0.0;
  for (int n = 0; n < map.cellCount(); ++n) total += entropy(map.h(n));
  return total / map.cellCount();
}

}  // namespace riemcon::mapping
