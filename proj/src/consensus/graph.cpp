#include "riemcon/consensus/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::consensus {

namespace {

constexpr double kStochasticTolerance = 1e-12;

std::string edgeName(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

CommGraph::CommGraph(int n_agents, const std::vector<Edge>& edges) : n_(n_agents) {
  if (n_agents <= 0) throw GraphError("graph needs at least one agent");
  std::set<Edge> unique;
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_agents || j >= n_agents)
      throw GraphError("edge " + edgeName(i, j) + " references an unknown agent");
    if (i == j) throw GraphError("self loop at agent " + std::to_string(i));
    unique.insert({std::min(i, j), std::max(i, j)});
  }
  std::vector<int> deg(n_agents, 0);
  for (auto [i, j] : unique) {
    ++deg[i];
    ++deg[j];
  }
  weights_ = Eigen::MatrixXd::Zero(n_agents, n_agents);
  for (auto [i, j] : unique) {
    const double w = 1.0 / (1.0 + std::max(deg[i], deg[j]));
    weights_(i, j) = w;
    weights_(j, i) = w;
  }
  for (int i = 0; i < n_agents; ++i) {
    double off = 0.0;
    for (int j = 0; j < n_agents; ++j)
      if (j != i) off += weights_(i, j);
    weights_(i, i) = 1.0 - off;
  }
  buildAdjacency();
  validate();
}

CommGraph::CommGraph(const Eigen::MatrixXd& weights) : n_(static_cast<int>(weights.rows())) {
  if (weights.rows() != weights.cols() || weights.rows() == 0)
    throw GraphError("weight matrix must be square and nonempty");
  if (!weights.allFinite()) throw GraphError("weight matrix has non-finite entries");
  weights_ = weights;
  buildAdjacency();
  validate();
}

void CommGraph::buildAdjacency() {
  edges_.clear();
  neighbors_.assign(n_, {});
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j || weights_(i, j) <= 0.0) continue;
      neighbors_[i].push_back(j);
      if (i < j) edges_.push_back({i, j});
    }
}

void CommGraph::validate() const {
  for (int i = 0; i < n_; ++i) {
    if (weights_(i, i) <= 0.0)
      throw GraphError("diagonal weight of agent " + std::to_string(i) + " must be positive");
    if (std::abs(weights_.row(i).sum() - 1.0) > kStochasticTolerance)
      throw GraphError("row " + std::to_string(i) + " of the weight matrix does not sum to 1");
    for (int j = 0; j < n_; ++j) {
      if (weights_(i, j) < 0.0) throw GraphError("negative weight at " + edgeName(i, j));
      if (weights_(i, j) != weights_(j, i))
        throw GraphError("weight matrix is not symmetric at " + edgeName(i, j));
    }
  }
  std::vector<bool> seen(n_, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : neighbors_[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
  }
  if (reached != n_)
    throw GraphError("communication graph is disconnected (" + std::to_string(reached) + " of " +
                     std::to_string(n_) + " agents reachable from agent 0)");
}

bool CommGraph::hasEdge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) return false;
  return weights_(i, j) > 0.0;
}

}  // namespace riemcon::consensus
