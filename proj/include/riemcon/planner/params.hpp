#pragma once

#include "riemcon/manifold/se3.hpp"

namespace riemcon::planner {

/// Viewpoint planning parameters. Defaults are the full-scale values; desk
/// scale scenarios override xi_max, d_q, alpha_scale and gamma_q.
struct PlannerParams {
  double eps_p = 0.1;
  double alpha_scale = 0.1;  ///< alpha_p(k) = alpha_scale / (k + 1)
  double gamma_c = 1e-3;
  double gamma_q = 1e-2;
  double d_q = 20.0;     ///< meters
  double xi_max = 16.0;  ///< meters
  int horizon = 5;       ///< T
  int k_p = 20;
  double thresh_p = 0.4;
  manifold::MetricWeights gamma = manifold::MetricWeights::standard();
  /// Freeze z, roll and pitch by dropping those twist components.
  bool planar = true;
  /// Use s(X) at the pose itself in the information gradient instead of s(V).
  bool literal_info_term = false;

  /// d_q = fov_diameter + xi_max.
  static double derivedOverlapRadius(double fov_diameter, double xi_max) {
    return fov_diameter + xi_max;
  }

  double alpha(int k) const { return alpha_scale / (k + 1); }

  /// Throws ConfigError listing every violated constraint.
  void validate() const;
};

/// Zeroes the z translation and the roll/pitch rotation of a body twist.
manifold::Twist projectPlanar(const manifold::Twist& xi);

}  // namespace riemcon::planner
