#pragma once

/** Two agents on the unit circle jointly find the leading eigenvector of
 * Z^T Z while each only holds its own block of rows Z_i. */

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "riemcon/consensus/optimizer.hpp"
#include "riemcon/manifold/manifolds.hpp"

namespace riemcon::consensus {

using manifold::CirclePoint;

/// f_i(x) = ||Z_i x||^2.
double eigenvectorObjective(const CirclePoint& x, const Eigen::MatrixXd& zi);

/// Riemannian gradient of f_i: (I - x x^T) 2 Z_i^T Z_i x.
Eigen::Vector2d eigenvectorLocalGradient(const CirclePoint& x, const Eigen::MatrixXd& zi);

struct EigenDemoData {
  Eigen::MatrixXd z;                 ///< all rows, scaled so lambda_1(Z^T Z) = 1
  std::vector<Eigen::MatrixXd> parts;  ///< row blocks held by each agent
  Eigen::Vector2d leading;           ///< oracle leading eigenvector
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Splits z row-wise, the first round(split * rows) rows going to agent 0.
/// Throws DegenerateDataError when the two eigenvalues of Z^T Z agree within
/// 1e-9 (relative), since the leading direction is then not unique.
EigenDemoData splitEigenData(const Eigen::MatrixXd& z, double split);

/// Anisotropic Gaussian cloud with a random orientation, rows sorted by their
/// first coordinate so the two halves see differently tilted data.
EigenDemoData makeEigenDemoData(int points, std::uint64_t seed, double split = 0.5);

struct EigenDemoConfig {
  int points = 200;
  std::uint64_t seed = 0;
  double split = 0.5;
  double epsilon = 0.25;
  double alpha_scale = 2.0;
  int iterations = 20000;
};

struct EigenDemoResult {
  std::vector<CirclePoint> states;
  OptTrace trace;
  std::vector<double> angle;  ///< worst agent angle to the oracle, per iteration
  Eigen::Vector2d oracle;
  double oracle_objective = 0.0;
  double final_angle = 0.0;
};

/// Angle between the lines spanned by a and b, in [0, pi/2].
double lineAngle(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

/// Throws ScheduleError for epsilon outside (0, 1/2).
EigenDemoResult runEigenDemo(const EigenDemoData& data, const EigenDemoConfig& config);
EigenDemoResult runEigenDemo(const EigenDemoConfig& config);

/// CSV with columns iteration,phi,objective,angle_rad.
void writeEigenTrace(std::ostream& out, const EigenDemoResult& result);

}  // namespace riemcon::consensus
