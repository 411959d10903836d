#include "riemcon/planner/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "riemcon/errors.hpp"

namespace riemcon::planner {

using manifold::Pose;
using manifold::Twist;

namespace {

void checkShape(const TeamPlan& a, const TeamPlan& b) {
  if (a.size() != b.size()) throw DimensionError("plans cover different numbers of robots");
  for (std::size_t l = 0; l < a.size(); ++l)
    if (a[l].size() != b[l].size()) throw DimensionError("plans have different horizons");
}

PlanGradient zeroGradient(const TeamPlan& plan) {
  PlanGradient g(plan.size());
  for (std::size_t l = 0; l < plan.size(); ++l) g[l].assign(plan[l].size(), Twist::Zero());
  return g;
}

}  // namespace

TeamPlan planConsensusStep(const TeamPlan& plan, const std::vector<NeighborPlan>& neighbors,
                           const PlannerParams& params, bool skip_cut_locus,
                           ConsensusStats* stats) {
  for (const auto& nb : neighbors) checkShape(plan, *nb.plan);
  if (params.eps_p == 0.0 || neighbors.empty()) return plan;
  const Eigen::Matrix<double, 6, 1> gamma = params.gamma.gamma();
  TeamPlan out = plan;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    for (std::size_t tau = 0; tau < plan[l].size(); ++tau) {
      const Pose& x = plan[l][tau];
      Twist step = Twist::Zero();
      for (const auto& nb : neighbors) {
        try {
          const Twist xi = manifold::relativeTwist(x, (*nb.plan)[l][tau]);
          step += nb.weight *
                  (manifold::leftJacobianInverseTransposeSE3(xi) * gamma.cwiseProduct(xi));
          if (stats) ++stats->terms;
        } catch (const CutLocusError&) {
          if (!skip_cut_locus) throw;
          if (stats) ++stats->cut_locus_skips;
        }
      }
      step *= params.eps_p;
      if (params.planar) step = projectPlanar(step);
      out[l][tau] = x.retract(step);
    }
  }
  return out;
}

PlanGradient planLocalGradient(const TeamPlan& plan, int own, const std::vector<SampleSet>& samples,
                               const PlannerParams& params) {
  if (own < 0 || own >= static_cast<int>(plan.size())) throw DimensionError("own index out of range");
  const auto& row = plan[own];
  if (samples.size() != row.size()) throw DimensionError("one sample set per step is required");
  const Eigen::Matrix<double, 6, 1> gamma = params.gamma.gamma();
  const double scale = std::numbers::pi / params.xi_max;
  PlanGradient g = zeroGradient(plan);

  for (std::size_t t1 = 0; t1 < row.size(); ++t1) {
    const Pose& x = row[t1];
    const SampleSet& set = samples[t1];
    if (set.poses.empty() || set.poses.size() != set.scores.size())
      throw DimensionError("sample set is empty or has mismatched scores");

    // information term
    const std::size_t n = set.poses.size();
    std::vector<Twist> xis(n);
    std::vector<double> dbar(n);
    double c_set = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      xis[k] = manifold::relativeTwist(x, set.poses[k]);
      dbar[k] = scale * std::sqrt(params.gamma.quadratic(xis[k]));
      const double w = 1.0 + std::cos(dbar[k]);
      c_set += w;
      weighted += w * set.scores[k];
    }
    const double f = weighted / c_set;
    Twist info = Twist::Zero();
    for (std::size_t k = 0; k < n; ++k) {
      const double s = params.literal_info_term ? set.scores.front() : set.scores[k];
      const double sinc = dbar[k] < 1e-8 ? 1.0 : std::sin(dbar[k]) / dbar[k];
      info += (s - f) * sinc / c_set *
              (manifold::leftJacobianInverseTransposeSE3(xis[k]) * gamma.cwiseProduct(xis[k]));
    }
    g[own][t1] += scale * scale * info;

    // overlap terms against every pose of the team
    if (params.gamma_q == 0.0) continue;
    const Eigen::Vector3d pi = x.translation();
    for (std::size_t l = 0; l < plan.size(); ++l) {
      for (std::size_t t2 = 0; t2 < plan[l].size(); ++t2) {
        const double wpair = overlapPairWeight(own, static_cast<int>(t1), static_cast<int>(l),
                                               static_cast<int>(t2));
        if (wpair == 0.0) continue;
        const Pose& y = plan[l][t2];
        const Eigen::Vector3d dp = pi - y.translation();
        const double r = dp.norm();
        const double m = 2.0 * params.d_q - r;
        if (m <= 0.0) continue;
        Eigen::Vector3d u;
        if (r > 0.0) {
          u = dp / r;
        } else {
          // coincident positions: push the lexicographically smaller pose along +x
          const bool first = std::make_tuple(own, t1) < std::make_tuple(static_cast<int>(l), t2);
          u = (first ? 1.0 : -1.0) * Eigen::Vector3d::UnitX();
        }
        const Eigen::Vector3d c_tot = params.gamma_q * wpair * m * u;
        g[own][t1].head<3>() += 2.0 * x.rotation().transpose() * c_tot;
        g[l][t2].head<3>() -= 2.0 * y.rotation().transpose() * c_tot;
      }
    }
  }
  if (params.planar)
    for (auto& r : g)
      for (auto& t : r) t = projectPlanar(t);
  return g;
}

PlanGradient planLocalGradient(const TeamPlan& plan, int own, const ScoreField& field,
                               const PlannerParams& params, std::vector<SampleSet>* used_samples) {
  std::vector<SampleSet> sets;
  sets.reserve(plan.at(own).size());
  for (const auto& x : plan[own]) sets.push_back(scoreSamples(field, x, params));
  auto g = planLocalGradient(plan, own, sets, params);
  if (used_samples) *used_samples = std::move(sets);
  return g;
}

TeamPlan applyGradient(const TeamPlan& plan, const PlanGradient& g, double alpha,
                       const PlannerParams& params) {
  TeamPlan out = plan;
  for (std::size_t l = 0; l < plan.size(); ++l)
    for (std::size_t tau = 0; tau < plan[l].size(); ++tau) {
      const Twist step = params.planar ? projectPlanar(g[l][tau]) : g[l][tau];
      out[l][tau] = plan[l][tau].retract(alpha * step);
    }
  return out;
}

TeamPlan plannerIteration(const TeamPlan& plan, int own, const std::vector<NeighborPlan>& neighbors,
                          const ScoreField& field, const PlannerParams& params, int k,
                          bool skip_cut_locus, ConsensusStats* stats) {
  const TeamPlan mixed = planConsensusStep(plan, neighbors, params, skip_cut_locus, stats);
  const PlanGradient g = planLocalGradient(mixed, own, field, params);
  return applyGradient(mixed, g, params.alpha(k), params);
}

double planPoseDist2(const Pose& x, const Pose& y, const manifold::MetricWeights& weights) {
  try {
    return manifold::dist2(x, y, weights);
  } catch (const CutLocusError&) {
    return manifold::dist2(x, y.retract((Twist() << 0, 0, 0, 0, 0, 1e-5).finished()), weights);
  }
}

double planDiscrepancy(const std::vector<TeamPlan>& plans, const consensus::CommGraph& graph,
                       const manifold::MetricWeights& weights) {
  if (static_cast<int>(plans.size()) != graph.size())
    throw DimensionError("one plan per agent is required");
  double total = 0.0;
  for (const auto& [i, j] : graph.edges()) {
    checkShape(plans[i], plans[j]);
    double d = 0.0;
    for (std::size_t l = 0; l < plans[i].size(); ++l)
      for (std::size_t tau = 0; tau < plans[i][l].size(); ++tau)
        d += planPoseDist2(plans[i][l][tau], plans[j][l][tau], weights);
    total += graph.weight(i, j) * d;
  }
  return total;
}

TeamPlan initialTeamPlan(const mapping::OccupancyGrid2D& occ, const std::vector<Pose>& robot_poses,
                         int horizon, bool* exploration_complete) {
  if (horizon < 1) throw DimensionError("horizon must be at least 1");
  const auto clusters = mapping::frontierClusters(occ);
  if (exploration_complete) *exploration_complete = clusters.empty();
  TeamPlan plan;
  std::vector<std::uint8_t> claimed(clusters.size(), 0);
  auto viewpoint = [&](std::size_t c) {
    const int cell = clusters[c].viewpoint_cell;
    return occ.center(cell % occ.nx, cell / occ.nx);
  };
  for (const auto& start : robot_poses) {
    const double z = start.translation().z();
    std::vector<Pose> row;
    if (clusters.empty()) {
      double yaw = start.yaw();
      for (int t = 0; t < horizon; ++t) {
        row.push_back(Pose::planar(start.translation().x(), start.translation().y(), z, yaw));
        yaw += std::numbers::pi / 2.0;
      }
      plan.push_back(std::move(row));
      continue;
    }
    const Eigen::Vector2d s = start.translation().head<2>();
    std::vector<std::size_t> order(clusters.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::make_tuple(-static_cast<int>(clusters[a].cells.size()), (viewpoint(a) - s).norm(),
                             clusters[a].cells.front()) <
             std::make_tuple(-static_cast<int>(clusters[b].cells.size()), (viewpoint(b) - s).norm(),
                             clusters[b].cells.front());
    });
    const auto first = std::find_if(order.begin(), order.end(), [&](std::size_t c) { return !claimed[c]; });
    if (first != order.end()) {
      claimed[*first] = 1;
      std::rotate(order.begin(), first, first + 1);
    }
    const int used = std::min<int>(horizon, static_cast<int>(order.size()));
    for (int t = 0; t < used; ++t) {
      const Eigen::Vector2d p = viewpoint(order[t]);
      row.push_back(Pose::planar(p.x(), p.y(), z, clusters[order[t]].yaw));
    }
    double yaw = clusters[order[used - 1]].yaw;
    const Eigen::Vector3d last = row.back().translation();
    for (int t = used; t < horizon; ++t) {
      yaw += std::numbers::pi / 2.0;
      row.push_back(Pose::planar(last.x(), last.y(), z, yaw));
    }
    plan.push_back(std::move(row));
  }
  return plan;
}

}  // namespace riemcon::planner
