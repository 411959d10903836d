#include "riemcon/planner/params.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "riemcon/errors.hpp"

namespace riemcon::planner {

void PlannerParams::validate() const {
  std::vector<std::string> p;
  auto nonneg = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) p.push_back(std::string(name) + " must be finite and >= 0");
  };
  nonneg(eps_p, "eps_p");
  nonneg(alpha_scale, "alpha_p scale");
  nonneg(gamma_c, "gamma_c");
  nonneg(gamma_q, "gamma_q");
  if (!(d_q > 0.0)) p.push_back("d_q must be positive");
  if (!(xi_max > 0.0)) p.push_back("xi_max must be positive");
  if (horizon < 1) p.push_back("horizon T must be at least 1");
  if (k_p < 0) p.push_back("k_p must be nonnegative");
  if (!(thresh_p >= 0.0 && thresh_p <= 1.0)) p.push_back("thresh_p must lie in [0, 1]");
  if (!p.empty()) throw ConfigError(std::move(p));
}

manifold::Twist projectPlanar(const manifold::Twist& xi) {
  manifold::Twist out = xi;
  out(2) = 0.0;
  out(3) = 0.0;
  out(4) = 0.0;
  return out;
}

}  // namespace riemcon::planner
