#include "riemcon/consensus/eigen_demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "riemcon/errors.hpp"

namespace riemcon::consensus {

using manifold::Circle;

double eigenvectorObjective(const CirclePoint& x, const Eigen::MatrixXd& zi) {
  if (zi.cols() != 2) throw DimensionError("eigenvector data must have 2 columns");
  return (zi * x.direction()).squaredNorm();
}

Eigen::Vector2d eigenvectorLocalGradient(const CirclePoint& x, const Eigen::MatrixXd& zi) {
  if (zi.cols() != 2) throw DimensionError("eigenvector data must have 2 columns");
  const Eigen::Vector2d& d = x.direction();
  const Eigen::Vector2d g = 2.0 * (zi.transpose() * (zi * d));
  return g - d * d.dot(g);
}

EigenDemoData splitEigenData(const Eigen::MatrixXd& z, double split) {
  if (z.cols() != 2) throw DimensionError("eigenvector data must have 2 columns");
  if (z.rows() < 2) throw DimensionError("eigenvector data needs at least 2 rows");
  if (!(split > 0.0 && split < 1.0)) throw DimensionError("split must lie strictly in (0, 1)");
  const int rows = static_cast<int>(z.rows());
  const int first = std::clamp(static_cast<int>(std::lround(split * rows)), 1, rows - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(z.transpose() * z);
  const double l1 = es.eigenvalues()(1);
  const double l2 = es.eigenvalues()(0);
  if (!(l1 > 0.0) || (l1 - l2) <= 1e-9 * l1)
    throw DegenerateDataError("leading eigenvalue is repeated; the eigenvector is not unique");

  EigenDemoData data;
  data.z = z / std::sqrt(l1);
  data.lambda1 = 1.0;
  data.lambda2 = l2 / l1;
  data.leading = es.eigenvectors().col(1).normalized();
  data.parts.push_back(data.z.topRows(first));
  data.parts.push_back(data.z.bottomRows(rows - first));
  return data;
}

EigenDemoData makeEigenDemoData(int points, std::uint64_t seed, double split) {
  if (points < 2) throw DimensionError("eigenvector demo needs at least 2 points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> orient(-M_PI, M_PI), minor(0.2, 0.6);
  std::normal_distribution<double> gauss;
  const double theta = orient(rng);
  const double s_minor = minor(rng);
  const Eigen::Matrix2d rot = Eigen::Rotation2Dd(theta).toRotationMatrix();
  Eigen::MatrixXd z(points, 2);
  for (int r = 0; r < points; ++r) {
    const Eigen::Vector2d local(gauss(rng), s_minor * gauss(rng));
    z.row(r) = (rot * local).transpose();
  }
  std::vector<int> order(points);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return z(a, 0) < z(b, 0); });
  Eigen::MatrixXd sorted(points, 2);
  for (int r = 0; r < points; ++r) sorted.row(r) = z.row(order[r]);
  return splitEigenData(sorted, split);
}

double lineAngle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const double c = std::abs(a.normalized().dot(b.normalized()));
  const double s = std::abs(a.normalized().x() * b.normalized().y() -
                            a.normalized().y() * b.normalized().x());
  return std::atan2(s, c);
}

EigenDemoResult runEigenDemo(const EigenDemoData& data, const EigenDemoConfig& config) {
  const StepSchedule schedule(config.epsilon, config.alpha_scale);
  validateSchedule(schedule, 0.0);
  const CommGraph graph(2, {{0, 1}});

  Problem<Circle> problem;
  problem.objective = [&data](int i, const CirclePoint& x) {
    return eigenvectorObjective(x, data.parts.at(i));
  };
  problem.gradient = [&data](int i, const CirclePoint& x) {
    return eigenvectorLocalGradient(x, data.parts.at(i));
  };

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  double a0 = angle(rng), a1 = angle(rng);
  while (std::abs(std::remainder(a1 - a0, 2.0 * M_PI)) > M_PI - 0.1) a1 = angle(rng);
  JointState<Circle> init{CirclePoint::fromAngle(a0), CirclePoint::fromAngle(a1)};

  EigenDemoResult result;
  result.oracle = data.leading;
  result.oracle_objective = data.lambda1;
  auto observer = [&](int, const JointState<Circle>& joint) {
    double worst = 0.0;
    for (const auto& x : joint) worst = std::max(worst, lineAngle(x.direction(), data.leading));
    result.angle.push_back(worst);
  };
  StopCriteria stop;
  stop.max_iters = config.iterations;
  auto out = run(problem, std::move(init), graph, schedule, stop,
                 std::function<void(int, const JointState<Circle>&)>(observer));
  result.states = std::move(out.state);
  result.trace = std::move(out.trace);
  result.final_angle = 0.0;
  for (const auto& x : result.states)
    result.final_angle = std::max(result.final_angle, lineAngle(x.direction(), data.leading));
  return result;
}

EigenDemoResult runEigenDemo(const EigenDemoConfig& config) {
  return runEigenDemo(makeEigenDemoData(config.points, config.seed, config.split), config);
}

void writeEigenTrace(std::ostream& out, const EigenDemoResult& result) {
  out << "iteration,phi,objective,angle_rad\n";
  char buf[128];
  for (std::size_t k = 0; k < result.trace.records.size(); ++k) {
    const auto& r = result.trace.records[k];
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g\n", k, r.phi, r.objective,
                  k < result.angle.size() ? result.angle[k] : 0.0);
    out << buf;
  }
}

}  // namespace riemcon::consensus
