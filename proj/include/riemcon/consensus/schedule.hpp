#pragma once

#include <optional>
#include <string>
#include <vector>

namespace riemcon::consensus {

/// Consensus step epsilon plus the harmonic local step alpha_k = a/(k+1).
/// a = 0 gives consensus-only runs.
class StepSchedule {
 public:
  StepSchedule(double epsilon, double alpha_scale);

  double epsilon() const { return epsilon_; }
  double alphaScale() const { return alpha_scale_; }
  double alpha(int k) const { return alpha_scale_ / (static_cast<double>(k) + 1.0); }

 private:
  double epsilon_;
  double alpha_scale_;
};

/// L = 4 (1 + rho).
inline double smoothnessConstant(double rho) { return 4.0 * (1.0 + rho); }

/// Checks epsilon in (0, 2/L). With a known curvature ratio an out-of-range
/// epsilon throws ScheduleError; with an unknown ratio (SE(3)) the problems
/// come back as warnings instead.
std::vector<std::string> validateSchedule(const StepSchedule& schedule,
                                          std::optional<double> curvature_ratio);

}  // namespace riemcon::consensus
