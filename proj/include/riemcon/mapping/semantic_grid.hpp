#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "riemcon/consensus/graph.hpp"
#include "riemcon/manifold/se3.hpp"
#include "riemcon/mapping/grid.hpp"
#include "riemcon/mapping/logodds.hpp"
#include "riemcon/netsim/wire.hpp"

namespace riemcon::mapping {

/// Dense multi-class log-odds map owned by one robot.
///
/// Column n of the log-odds matrix is cell n's vector h_n with h_n(0) = 0.
/// Evidence is kept as a running sum of log inverse-model values and a
/// count, so log q_n is their ratio (or the raw sum when normalization is
/// disabled). Every change to h bumps a per-cell stamp used for delta
/// publishing.
class SemanticGrid {
 public:
  SemanticGrid(GridGeometry geometry, int classes_plus_one, double alpha_scale = 1.0);

  const GridGeometry& geometry() const { return geometry_; }
  int classesPlusOne() const { return static_cast<int>(h_.rows()); }
  int cellCount() const { return static_cast<int>(h_.cols()); }

  Eigen::VectorXd h(int cell) const { return h_.col(cell); }
  const Eigen::MatrixXd& logOddsMatrix() const { return h_; }
  /// Overwrites a cell (used when merging received data). Throws unless the
  /// vector has length C+1, is finite and starts with 0.
  void setH(int cell, const Eigen::VectorXd& h);

  Eigen::VectorXd logQ(int cell) const;
  int observationCount(int cell) const { return obs_count_[cell]; }
  int updateCount(int cell) const { return update_count_[cell]; }
  bool known(int cell) const { return known_[cell] != 0; }
  void markKnown(int cell) { known_[cell] = 1; }

  /// When false, log q is the plain sum of log-likelihoods (Bayes fusion)
  /// instead of their mean.
  void setNormalizeEvidence(bool on) { normalize_evidence_ = on; }
  bool normalizeEvidence() const { return normalize_evidence_; }
  double alphaScale() const { return alpha_scale_; }

  /// Adds one log-likelihood observation to a cell.
  void accumulate(int cell, const Eigen::VectorXd& log_likelihood);

  /// h += alpha_k g with alpha_k = a/(k+1) and the cell's own k, then h(0) = 0.
  void localStep(int cell);
  void localSteps(const std::vector<int>& cells);

  /// Simultaneous consensus update of every cell against the given neighbor
  /// maps. Returns the cells whose log-odds changed.
  std::vector<int> consensusStep(const std::vector<std::pair<double, const SemanticGrid*>>& neighbors,
                                 double eps);

  Eigen::VectorXd pmf(int cell) const { return softmax(h_.col(cell)); }
  int mlClass(int cell) const { return argmaxClass(h_.col(cell)); }

  /// Monotone change counter. cellsChangedAfter(s) lists cells modified
  /// after stamp() returned s.
  std::uint64_t stamp() const { return clock_; }
  std::vector<int> cellsChangedAfter(std::uint64_t stamp) const;
  std::vector<int> knownCells() const;

  netsim::MapMessage toMessage(const std::vector<int>& cells) const;
  /// Writes the cells of a message and marks them known. Returns their indices.
  std::vector<int> applyMessage(const netsim::MapMessage& message);

 private:
  void touch(int cell) { changed_[cell] = ++clock_; }
  void checkCell(int cell) const;

  GridGeometry geometry_;
  double alpha_scale_;
  bool normalize_evidence_ = true;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd log_q_sum_;
  std::vector<int> obs_count_;
  std::vector<int> update_count_;
  std::vector<std::uint8_t> known_;
  std::vector<std::uint64_t> changed_;
  std::uint64_t clock_ = 0;
};

/// One ray of a semantic point cloud, expressed in the sensor frame.
struct SemanticRay {
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
  double range = 0.0;
  int category = 0;
  bool max_range = false;
};

/// Accumulates inverse-model evidence along every ray, then runs the local
/// gradient step on each touched cell. Returns the touched cells in
/// increasing order.
std::vector<int> integratePointCloud(SemanticGrid& map, const manifold::Pose& sensor_pose,
                                     const std::vector<SemanticRay>& cloud,
                                     const InverseModelParams& params);

/// sum over edges (i < j) of A_ij sum_n ||h^j_n - h^i_n||^2.
double mapDiscrepancy(const std::vector<const SemanticGrid*>& maps,
                      const consensus::CommGraph& graph);

/// Mean per-cell entropy over the whole grid.
double normalizedEntropy(const SemanticGrid& map);

}  // namespace riemcon::mapping
