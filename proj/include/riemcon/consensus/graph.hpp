#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace riemcon::consensus {

using Edge = std::pair<int, int>;

/// Undirected communication graph with symmetric, row-stochastic weights.
/// Construction rejects disconnected graphs.
class CommGraph {
 public:
  /// Metropolis-Hastings weights: A_ij = 1/(1 + max(deg_i, deg_j)) on edges,
  /// A_ii takes the remainder of the row.
  CommGraph(int n_agents, const std::vector<Edge>& edges);

  /// Explicit weights. The edge set is read off the positive off-diagonal
  /// entries.
  explicit CommGraph(const Eigen::MatrixXd& weights);

  int size() const { return n_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }

  /// Sorted neighbor ids of agent i, excluding i.
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  int degree(int i) const { return static_cast<int>(neighbors_.at(i).size()); }
  bool hasEdge(int i, int j) const;

  /// Unordered edges as (i, j) with i < j, lexicographically sorted.
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  void buildAdjacency();
  void validate() const;

  int n_;
  Eigen::MatrixXd weights_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

}  // namespace riemcon::consensus
