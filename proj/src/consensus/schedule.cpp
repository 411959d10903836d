#include "riemcon/consensus/schedule.hpp"

#include <cmath>
#include <cstdio>

#include "riemcon/errors.hpp"

namespace riemcon::consensus {

StepSchedule::StepSchedule(double epsilon, double alpha_scale)
    : epsilon_(epsilon), alpha_scale_(alpha_scale) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw ScheduleError("consensus step epsilon must be a positive finite number");
  if (!std::isfinite(alpha_scale) || alpha_scale < 0.0)
    throw ScheduleError("local step scale must be a nonnegative finite number");
}

std::vector<std::string> validateSchedule(const StepSchedule& schedule,
                                          std::optional<double> curvature_ratio) {
  const double rho = curvature_ratio.value_or(0.0);
  const double bound = 2.0 / smoothnessConstant(rho);
  char buf[160];
  if (curvature_ratio) {
    if (schedule.epsilon() >= bound) {
      std::snprintf(buf, sizeof buf, "consensus step epsilon = %.9g must be below 2/L = %.9g",
                    schedule.epsilon(), bound);
      throw ScheduleError(buf);
    }
    return {};
  }
  std::vector<std::string> warnings;
  if (schedule.epsilon() >= bound) {
    std::snprintf(buf, sizeof buf,
                  "consensus step epsilon = %.9g exceeds 2/L = %.9g even for zero curvature",
                  schedule.epsilon(), bound);
    warnings.emplace_back(buf);
  } else {
    warnings.emplace_back(
        "curvature ratio is unknown; the consensus step bound cannot be verified");
  }
  return warnings;
}

}  // namespace riemcon::consensus
