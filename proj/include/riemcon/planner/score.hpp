#pragma once

#include <vector>

#include "riemcon/manifold/se3.hpp"
#include "riemcon/mapping/occupancy.hpp"
#include "riemcon/mapping/semantic_grid.hpp"
#include "riemcon/planner/params.hpp"
#include "riemcon/world/sensor.hpp"

namespace riemcon::planner {

/// Pose score s(V). Implementations may cache and are not thread-safe.
class ScoreField {
 public:
  virtual ~ScoreField() = default;
  virtual double score(const manifold::Pose& v) const = 0;
};

/// s(V) = I(V) + gamma_c log D(V), where I is the summed entropy of the
/// cells the sensor would see from V. Rays stop at the first cell whose ML
/// class is not free, and each cell counts once per pose. The map is read
/// once at construction.
class EntropyScoreField final : public ScoreField {
 public:
  EntropyScoreField(const mapping::SemanticGrid& map, const world::SensorParams& sensor,
                    double gamma_c, const mapping::TraversabilityClasses& classes);

  double info(const manifold::Pose& v) const;
  double logDistance(const manifold::Pose& v) const;
  double score(const manifold::Pose& v) const override;
  const mapping::DistanceField& distanceField() const { return distance_; }

 private:
  mapping::GridGeometry geometry_;
  std::vector<Eigen::Vector3d> dirs_;
  double max_range_;
  double gamma_c_;
  std::vector<double> entropy_;
  std::vector<std::uint8_t> blocked_;
  mapping::DistanceField distance_;
  mutable std::vector<unsigned> seen_;
  mutable unsigned epoch_ = 0;
};

/// Information part of EntropyScoreField for one pose.
double infoScore(const mapping::SemanticGrid& map, const manifold::Pose& pose,
                 const world::SensorParams& sensor);

/// Sample poses around `center`: body-frame offsets {-xi/2, 0, xi/2}^2 in the
/// ground plane times yaw offsets {-pi/4, 0, pi/4}, keeping those within the
/// geodesic ball of radius xi_max. The center is always first.
std::vector<manifold::Pose> sampleViewpoints(const manifold::Pose& center,
                                             const PlannerParams& params);

/// Samples with their (frozen) scores.
struct SampleSet {
  std::vector<manifold::Pose> poses;
  std::vector<double> scores;
};

SampleSet scoreSamples(const ScoreField& field, const manifold::Pose& center,
                       const PlannerParams& params);

struct Interpolation {
  double value = 0.0;
  std::vector<double> lambda;
};

/// f(X) = sum_V lambda_V(X) s(V) with lambda_V proportional to 1 + cos(dbar).
Interpolation interpolate(const SampleSet& samples, const manifold::Pose& x,
                          const PlannerParams& params);

/// max{0, 2 d_q - ||p_x - p_y||}^2 on positions only.
double overlap(const manifold::Pose& x, const manifold::Pose& y, const PlannerParams& params);

/// rows[l][tau] is robot l's pose at step tau.
using TeamPlan = std::vector<std::vector<manifold::Pose>>;

/// Kronecker weight [1 - d_il d_tt'][1 - d_il / 2] of an overlap pair.
double overlapPairWeight(int i, int tau, int l, int tau2);

/// Local objective of robot `own` with one frozen sample set per step of its
/// own row.
double teamObjective(const TeamPlan& plan, int own, const std::vector<SampleSet>& samples,
                     const PlannerParams& params);

/// Same, drawing fresh samples around each pose of the own row.
double teamObjective(const TeamPlan& plan, int own, const ScoreField& field,
                     const PlannerParams& params);

}  // namespace riemcon::planner
