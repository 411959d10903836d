#pragma once

#include <utility>
#include <vector>

#include "riemcon/consensus/graph.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/planner/score.hpp"

namespace riemcon::planner {

/// grads[l][tau] is the body-frame ascent direction for pose (l, tau).
using PlanGradient = std::vector<std::vector<manifold::Twist>>;

struct NeighborPlan {
  double weight;
  const TeamPlan* plan;
};

struct ConsensusStats {
  int terms = 0;            ///< neighbor terms applied
  int cut_locus_skips = 0;  ///< terms dropped because the poses were antipodal in yaw
};

/// Right-perturbation consensus step applied to every pose of the plan.
/// With skip_cut_locus the terms whose relative rotation is too close to
/// pi are dropped and counted; otherwise CutLocusError propagates.
TeamPlan planConsensusStep(const TeamPlan& plan, const std::vector<NeighborPlan>& neighbors,
                           const PlannerParams& params, bool skip_cut_locus = false,
                           ConsensusStats* stats = nullptr);

/// Gradient of the local objective at `plan` with the given frozen sample
/// sets (one per step of the own row). The information part touches only the
/// own row; the overlap part touches every row.
/// With literal_info_term the score of the set's first sample (its center)
/// replaces s(V).
PlanGradient planLocalGradient(const TeamPlan& plan, int own, const std::vector<SampleSet>& samples,
                               const PlannerParams& params);

/// Draws fresh sample sets around the own row, then calls the overload above.
PlanGradient planLocalGradient(const TeamPlan& plan, int own, const ScoreField& field,
                               const PlannerParams& params,
                               std::vector<SampleSet>* used_samples = nullptr);

/// X <- X exp(alpha g) for every pose (planar-projected when configured).
TeamPlan applyGradient(const TeamPlan& plan, const PlanGradient& g, double alpha,
                       const PlannerParams& params);

/// One iteration k of the planner for robot `own`: consensus, local
/// gradient at the consensus point, then the gradient step.
TeamPlan plannerIteration(const TeamPlan& plan, int own, const std::vector<NeighborPlan>& neighbors,
                          const ScoreField& field, const PlannerParams& params, int k,
                          bool skip_cut_locus = false, ConsensusStats* stats = nullptr);

/// Squared geodesic distance that stays defined at the cut locus. When the
/// relative rotation is pi the logarithm is not unique but the distance is
/// continuous, so it is taken from a pose rotated 1e-5 rad off the antipode.
double planPoseDist2(const manifold::Pose& x, const manifold::Pose& y,
                     const manifold::MetricWeights& weights);

/// sum over edges of A_ij sum_{l,tau} d^2(X^i_{l,tau}, X^j_{l,tau}).
double planDiscrepancy(const std::vector<TeamPlan>& plans, const consensus::CommGraph& graph,
                       const manifold::MetricWeights& weights);

/// Frontier initialization for the whole team. Robots are served in index
/// order; each starts at the best frontier cluster (size, then distance
/// from that robot) not yet claimed by a lower-indexed robot and continues
/// through the remaining clusters in its own order.
TeamPlan initialTeamPlan(const mapping::OccupancyGrid2D& occ,
                         const std::vector<manifold::Pose>& robot_poses, int horizon,
                         bool* exploration_complete = nullptr);

}  // namespace riemcon::planner
