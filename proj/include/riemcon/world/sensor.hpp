#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "riemcon/manifold/se3.hpp"
#include "riemcon/mapping/semantic_grid.hpp"
#include "riemcon/world/world.hpp"

namespace riemcon::world {

struct SensorParams {
  double horizontal_fov = 1.5707963267948966;  ///< radians
  double vertical_fov = 1.0471975511965976;    ///< radians
  int rays_h = 16;
  int rays_v = 8;
  double max_range = 2.0;           ///< meters
  double range_noise_sigma = 0.01;  ///< meters
  double label_flip_prob = 0.02;

  /// Throws ConfigError listing every invalid field.
  void validate() const;
  int rayCount() const { return rays_h * rays_v; }
  /// Ray directions in the sensor frame (x forward, z up), azimuth-major,
  /// on a cell-centered angular grid over the field of view.
  std::vector<Eigen::Vector3d> rayDirections() const;
};

/// Per-agent random stream. The seed is mixed with the agent id so agents
/// sharing a scenario seed still draw independent noise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  std::mt19937_64& engine() { return engine_; }
  double normal(double sigma);
  double uniform();
  int uniformInt(int lo, int hi);  ///< inclusive bounds

 private:
  std::mt19937_64 engine_;
};

/// Casts the sensor's ray grid through the ground truth. A hit reports the
/// distance to the hit cell's entry face plus Gaussian noise (clamped to
/// [0, max_range]) and the cell's class, flipped to a uniformly drawn other
/// nonzero class with probability label_flip_prob. Rays without a hit
/// within max_range carry the max-range flag. Throws GeometryError when the
/// sensor is outside the world.
std::vector<mapping::SemanticRay> sense(const GroundTruthWorld& world,
                                        const manifold::Pose& sensor_pose,
                                        const SensorParams& params, Rng& rng);

}  // namespace riemcon::world
