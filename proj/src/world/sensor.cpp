#include "riemcon/world/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::world {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

void SensorParams::validate() const {
  std::vector<std::string> problems;
  const double two_pi = 2.0 * std::numbers::pi;
  if (!(horizontal_fov > 0.0 && horizontal_fov <= two_pi))
    problems.push_back("horizontal_fov must lie in (0, 2*pi]");
  if (!(vertical_fov > 0.0 && vertical_fov <= two_pi))
    problems.push_back("vertical_fov must lie in (0, 2*pi]");
  if (rays_h < 1 || rays_v < 1) problems.push_back("ray counts must be at least 1");
  if (!(max_range > 0.0) || !std::isfinite(max_range))
    problems.push_back("max_range must be positive");
  if (!(range_noise_sigma >= 0.0)) problems.push_back("range_noise_sigma must be nonnegative");
  if (!(label_flip_prob >= 0.0 && label_flip_prob <= 1.0))
    problems.push_back("label_flip_prob must lie in [0, 1]");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::vector<Eigen::Vector3d> SensorParams::rayDirections() const {
  std::vector<Eigen::Vector3d> dirs;
  dirs.reserve(rayCount());
  for (int i = 0; i < rays_h; ++i) {
    const double az = -horizontal_fov / 2 + horizontal_fov * (i + 0.5) / rays_h;
    for (int j = 0; j < rays_v; ++j) {
      const double el = -vertical_fov / 2 + vertical_fov * (j + 0.5) / rays_v;
      dirs.emplace_back(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    }
  }
  return dirs;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

double Rng::normal(double sigma) {
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(engine_);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

int Rng::uniformInt(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

std::vector<mapping::SemanticRay> sense(const GroundTruthWorld& world,
                                        const manifold::Pose& sensor_pose,
                                        const SensorParams& params, Rng& rng) {
  params.validate();
  const auto& g = world.geometry();
  const Eigen::Vector3d origin = sensor_pose.translation();
  if (!g.contains(g.cellOf(origin)))
    throw GeometryError("sensor position is outside the world");
  const int n_classes = world.classesPlusOne() - 1;
  std::vector<mapping::SemanticRay> out;
  out.reserve(params.rayCount());
  for (const auto& d : params.rayDirections()) {
    mapping::SemanticRay ray;
    ray.direction = d;
    int hit = -1;
    const auto t = mapping::castRay(g, origin, sensor_pose.rotation() * d, params.max_range,
                                    [&](int n) { return world.label(n) != 0; }, &hit);
    if (!t) {
      ray.range = params.max_range;
      ray.category = 0;
      ray.max_range = true;
    } else {
      ray.range = std::clamp(*t + rng.normal(params.range_noise_sigma), 0.0, params.max_range);
      ray.category = world.label(hit);
      if (n_classes > 1 && params.label_flip_prob > 0.0 && rng.uniform() < params.label_flip_prob) {
        int other = rng.uniformInt(1, n_classes - 1);
        if (other >= ray.category) ++other;
        ray.category = other;
      }
    }
    out.push_back(ray);
  }
  return out;
}

}  // namespace riemcon::world
