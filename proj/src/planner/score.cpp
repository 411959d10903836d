#include "riemcon/planner/score.hpp"

#include <cmath>
#include <numbers>

#include "riemcon/errors.hpp"

namespace riemcon::planner {

using manifold::Pose;

EntropyScoreField::EntropyScoreField(const mapping::SemanticGrid& map,
                                     const world::SensorParams& sensor, double gamma_c,
                                     const mapping::TraversabilityClasses& classes)
    : geometry_(map.geometry()),
      dirs_(sensor.rayDirections()),
      max_range_(sensor.max_range),
      gamma_c_(gamma_c),
      distance_(mapping::mlProject2D(map, classes)) {
  sensor.validate();
  const int n = map.cellCount();
  entropy_.resize(n);
  blocked_.resize(n);
  for (int c = 0; c < n; ++c) {
    const Eigen::VectorXd h = map.h(c);
    entropy_[c] = mapping::entropy(h);
    blocked_[c] = mapping::argmaxClass(h) != 0;
  }
  seen_.assign(n, 0);
}

double EntropyScoreField::info(const Pose& v) const {
  if (++epoch_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    epoch_ = 1;
  }
  double total = 0.0;
  const Eigen::Vector3d origin = v.translation();
  for (const auto& d : dirs_) {
    mapping::castRay(geometry_, origin, v.rotation() * d, max_range_,
                     [&](int cell) {
                       if (seen_[cell] != epoch_) {
                         seen_[cell] = epoch_;
                         total += entropy_[cell];
                       }
                       return blocked_[cell] != 0;
                     },
                     nullptr);
  }
  return total;
}

double EntropyScoreField::logDistance(const Pose& v) const {
  return std::log(distance_.at(Eigen::Vector2d(v.translation().head<2>())));
}

double EntropyScoreField::score(const Pose& v) const {
  const double i = info(v);
  return gamma_c_ == 0.0 ? i : i + gamma_c_ * logDistance(v);
}

double infoScore(const mapping::SemanticGrid& map, const Pose& pose,
                 const world::SensorParams& sensor) {
  const auto classes = mapping::TraversabilityClasses::withDefaultObstacles({}, map.classesPlusOne());
  return EntropyScoreField(map, sensor, 0.0, classes).info(pose);
}

std::vector<Pose> sampleViewpoints(const Pose& center, const PlannerParams& params) {
  const double h = params.xi_max / 2.0;
  const double q = std::numbers::pi / 4.0;
  std::vector<Pose> out{center};
  const double r2 = params.xi_max * params.xi_max;
  for (double dx : {-h, 0.0, h})
    for (double dy : {-h, 0.0, h})
      for (double dyaw : {-q, 0.0, q}) {
        if (dx == 0.0 && dy == 0.0 && dyaw == 0.0) continue;
        const Pose v = center * Pose::planar(dx, dy, 0.0, dyaw);
        if (manifold::dist2(center, v, params.gamma) <= r2) out.push_back(v);
      }
  return out;
}

SampleSet scoreSamples(const ScoreField& field, const Pose& center, const PlannerParams& params) {
  SampleSet s;
  s.poses = sampleViewpoints(center, params);
  s.scores.reserve(s.poses.size());
  for (const auto& v : s.poses) s.scores.push_back(field.score(v));
  return s;
}

Interpolation interpolate(const SampleSet& samples, const Pose& x, const PlannerParams& params) {
  if (samples.poses.empty() || samples.poses.size() != samples.scores.size())
    throw DimensionError("sample set is empty or has mismatched scores");
  Interpolation out;
  out.lambda.resize(samples.poses.size());
  double total = 0.0;
  for (std::size_t k = 0; k < samples.poses.size(); ++k) {
    const double d = std::sqrt(manifold::dist2(x, samples.poses[k], params.gamma));
    const double w = 1.0 + std::cos(std::numbers::pi / params.xi_max * d);
    out.lambda[k] = w;
    total += w;
  }
  if (!(total > 0.0)) throw GeometryError("all interpolation weights vanish");
  for (std::size_t k = 0; k < samples.poses.size(); ++k) {
    out.lambda[k] /= total;
    out.value += out.lambda[k] * samples.scores[k];
  }
  return out;
}

double overlap(const Pose& x, const Pose& y, const PlannerParams& params) {
  const double r = (x.translation() - y.translation()).norm();
  const double m = std::max(0.0, 2.0 * params.d_q - r);
  return m * m;
}

double overlapPairWeight(int i, int tau, int l, int tau2) {
  const double same_robot = i == l ? 1.0 : 0.0;
  const double same_pose = (i == l && tau == tau2) ? 1.0 : 0.0;
  return (1.0 - same_pose) * (1.0 - same_robot / 2.0);
}

double teamObjective(const TeamPlan& plan, int own, const std::vector<SampleSet>& samples,
                     const PlannerParams& params) {
  const auto& row = plan.at(own);
  if (samples.size() != row.size()) throw DimensionError("one sample set per step is required");
  double total = 0.0;
  for (std::size_t tau = 0; tau < row.size(); ++tau) {
    total += interpolate(samples[tau], row[tau], params).value;
    if (params.gamma_q == 0.0) continue;
    double q = 0.0;
    for (std::size_t j = 0; j < plan.size(); ++j)
      for (std::size_t t2 = 0; t2 < plan[j].size(); ++t2) {
        const double w = overlapPairWeight(own, static_cast<int>(tau), static_cast<int>(j),
                                           static_cast<int>(t2));
        if (w != 0.0) q += w * overlap(row[tau], plan[j][t2], params);
      }
    total -= params.gamma_q * q;
  }
  return total;
}

double teamObjective(const TeamPlan& plan, int own, const ScoreField& field,
                     const PlannerParams& params) {
  std::vector<SampleSet> sets;
  for (const auto& x : plan.at(own)) sets.push_back(scoreSamples(field, x, params));
  return teamObjective(plan, own, sets, params);
}

}  // namespace riemcon::planner
