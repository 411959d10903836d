#pragma once

/** Two-phase distributed optimizer: each iteration every agent first takes a
 * consensus step x~ = Exp_x(-eps * grad phi_i) using only its neighbors'
 * states, then a local ascent step x+ = Exp_x~(alpha_k * grad f_i(x~)).
 * Updates are synchronous: all agents read iterate k before any writes k+1.
 */

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riemcon/consensus/graph.hpp"
#include "riemcon/consensus/schedule.hpp"
#include "riemcon/errors.hpp"
#include "riemcon/manifold/manifolds.hpp"

namespace riemcon::consensus {

using manifold::RiemannianManifold;

template <RiemannianManifold M>
using JointState = std::vector<typename M::Point>;

/// What an agent may see during an iteration: its own state and its
/// neighbors' states with their weights.
template <RiemannianManifold M>
struct NeighborView {
  int agent = 0;
  const typename M::Point* self = nullptr;
  std::vector<std::pair<double, const typename M::Point*>> neighbors;
};

template <RiemannianManifold M>
NeighborView<M> neighborView(const JointState<M>& joint, const CommGraph& graph, int i) {
  NeighborView<M> view;
  view.agent = i;
  view.self = &joint.at(i);
  for (int j : graph.neighbors(i)) view.neighbors.push_back({graph.weight(i, j), &joint[j]});
  return view;
}

template <RiemannianManifold M>
struct Problem {
  M manifold;
  /// f^i evaluated at agent i's own state.
  std::function<double(int, const typename M::Point&)> objective;
  /// Riemannian gradient of f^i at the supplied point.
  std::function<typename M::Tangent(int, const typename M::Point&)> gradient;
};

/// phi(x) = sum over unordered edges of A_ij d^2(x_i, x_j).
template <RiemannianManifold M>
double aggregateDistance(const M& m, const JointState<M>& joint, const CommGraph& graph) {
  if (static_cast<int>(joint.size()) != graph.size())
    throw DimensionError("joint state size does not match the graph");
  double phi = 0.0;
  for (auto [i, j] : graph.edges()) phi += graph.weight(i, j) * m.dist2(joint[i], joint[j]);
  return phi;
}

/// -2 sum_j A_ij Log_{x_i}(x_j).
template <RiemannianManifold M>
typename M::Tangent consensusGradient(const M& m, const NeighborView<M>& view) {
  typename M::Tangent g = m.zeroTangent(*view.self);
  for (const auto& [w, xj] : view.neighbors) g -= 2.0 * w * m.log(*view.self, *xj);
  return g;
}

template <RiemannianManifold M>
typename M::Tangent consensusGradient(const M& m, const JointState<M>& joint,
                                      const CommGraph& graph, int i) {
  if (static_cast<int>(joint.size()) != graph.size())
    throw DimensionError("joint state size does not match the graph");
  return consensusGradient(m, neighborView<M>(joint, graph, i));
}

/// Per-iteration norms gathered by iterate().
struct StepNorms {
  double consensus_grad = 0.0;  ///< max over agents
  double local_grad = 0.0;      ///< max over agents
  double update = 0.0;          ///< sqrt of sum of squared step lengths
};

template <RiemannianManifold M>
JointState<M> iterate(const Problem<M>& problem, const JointState<M>& joint,
                      const CommGraph& graph, const StepSchedule& schedule, int k,
                      StepNorms* norms = nullptr) {
  const M& m = problem.manifold;
  if (static_cast<int>(joint.size()) != graph.size())
    throw DimensionError("joint state size does not match the graph");
  if (m.curvatureRatio()) validateSchedule(schedule, m.curvatureRatio());
  const double alpha = schedule.alpha(k);
  StepNorms local;
  double update_sq = 0.0;
  JointState<M> next;
  next.reserve(joint.size());
  for (int i = 0; i < graph.size(); ++i) {
    const auto view = neighborView<M>(joint, graph, i);
    const auto cg = consensusGradient(m, view);
    const auto x_tilde = m.exp(joint[i], (-schedule.epsilon()) * cg);
    typename M::Tangent step = m.zeroTangent(x_tilde);
    double local_norm = 0.0;
    if (problem.gradient) {
      const auto lg = problem.gradient(i, x_tilde);
      if (lg.size() != step.size())
        throw DimensionError("local gradient of agent " + std::to_string(i) +
                             " has the wrong dimension");
      local_norm = manifold::tangentNorm(m, x_tilde, lg);
      step = alpha * lg;
    }
    auto x_next = m.exp(x_tilde, step);
    m.validate(x_next);
    local.consensus_grad = std::max(local.consensus_grad, manifold::tangentNorm(m, joint[i], cg));
    local.local_grad = std::max(local.local_grad, local_norm);
    const double moved = schedule.epsilon() * manifold::tangentNorm(m, joint[i], cg) +
                         alpha * local_norm;
    update_sq += moved * moved;
    next.push_back(std::move(x_next));
  }
  local.update = std::sqrt(update_sq);
  if (norms) *norms = local;
  return next;
}

struct StopCriteria {
  std::optional<int> max_iters;
  std::optional<double> phi_tol;   ///< stop once phi <= phi_tol
  std::optional<double> grad_tol;  ///< stop once the update norm < grad_tol
};

enum class StopReason { None, MaxIterations, PhiTolerance, GradTolerance };

std::string toString(StopReason reason);

struct IterationRecord {
  double phi = 0.0;
  double objective = 0.0;
  double consensus_grad = 0.0;
  double local_grad = 0.0;
  double update = 0.0;
};

/// Records describe the state after each iteration; max_iters = 0 yields an
/// empty trace.
struct OptTrace {
  std::vector<IterationRecord> records;
  double best_objective = -std::numeric_limits<double>::infinity();
  int best_iteration = -1;
  double phi_at_best = 0.0;
  StopReason reason = StopReason::None;
};

template <RiemannianManifold M>
double totalObjective(const Problem<M>& problem, const JointState<M>& joint) {
  if (!problem.objective) return 0.0;
  double f = 0.0;
  for (int i = 0; i < static_cast<int>(joint.size()); ++i) f += problem.objective(i, joint[i]);
  return f;
}

template <RiemannianManifold M>
struct RunResult {
  JointState<M> state;
  OptTrace trace;
};

template <RiemannianManifold M>
RunResult<M> run(const Problem<M>& problem, JointState<M> initial, const CommGraph& graph,
                 const StepSchedule& schedule, const StopCriteria& stop,
                 const std::function<void(int, const JointState<M>&)>& observer = {},
                 std::vector<std::string>* warnings = nullptr) {
  if (!stop.max_iters && !stop.phi_tol && !stop.grad_tol)
    throw ScheduleError("at least one stopping criterion is required");
  if (stop.max_iters && *stop.max_iters < 0) throw ScheduleError("max_iters must be >= 0");
  auto w = validateSchedule(schedule, problem.manifold.curvatureRatio());
  if (warnings) warnings->insert(warnings->end(), w.begin(), w.end());

  RunResult<M> out{std::move(initial), {}};
  for (const auto& x : out.state) problem.manifold.validate(x);
  if (stop.max_iters && *stop.max_iters == 0) {
    out.trace.reason = StopReason::MaxIterations;
    return out;
  }
  for (int k = 0;; ++k) {
    StepNorms norms;
    out.state = iterate(problem, out.state, graph, schedule, k, &norms);
    IterationRecord rec;
    rec.phi = aggregateDistance(problem.manifold, out.state, graph);
    rec.objective = totalObjective(problem, out.state);
    rec.consensus_grad = norms.consensus_grad;
    rec.local_grad = norms.local_grad;
    rec.update = norms.update;
    if (rec.objective > out.trace.best_objective) {
      out.trace.best_objective = rec.objective;
      out.trace.best_iteration = k;
      out.trace.phi_at_best = rec.phi;
    }
    out.trace.records.push_back(rec);
    if (observer) observer(k, out.state);
    if (stop.max_iters && k + 1 >= *stop.max_iters) {
      out.trace.reason = StopReason::MaxIterations;
      break;
    }
    if (stop.phi_tol && rec.phi <= *stop.phi_tol) {
      out.trace.reason = StopReason::PhiTolerance;
      break;
    }
    if (stop.grad_tol && rec.update < *stop.grad_tol) {
      out.trace.reason = StopReason::GradTolerance;
      break;
    }
  }
  return out;
}

}  // namespace riemcon::consensus
