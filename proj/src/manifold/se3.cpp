#include "riemcon/manifold/se3.hpp"

#include <algorithm>
#include <cmath>

#include "riemcon/errors.hpp"

namespace riemcon::manifold {

namespace {

// Below this angle the closed forms of the Jacobian coefficients lose too many
// digits to cancellation, so truncated power series are used instead.
constexpr double kSeriesAngle = 0.2;
constexpr double kSeriesAngleInverse = 1e-2;

// sinθ/θ
double coeffA(double t) {
  if (t < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
  }
  return std::sin(t) / t;
}

// (1-cosθ)/θ²
double coeffB(double t) {
  if (t < kSeriesAngle) {
    const double t2 = t * t;
    return 0.5 - t2 / 24.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0 * (1.0 - t2 / 90.0)));
  }
  return (1.0 - std::cos(t)) / (t * t);
}

// (θ-sinθ)/θ³
double coeffC(double t) {
  if (t < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0 * (1.0 - t2 / 110.0)));
  }
  return (t - std::sin(t)) / (t * t * t);
}

// (θ²+2cosθ-2)/(2θ⁴)
double coeffD(double t) {
  if (t < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 / 24.0 - t2 / 720.0 * (1.0 - t2 / 56.0 * (1.0 - t2 / 90.0 * (1.0 - t2 / 132.0)));
  }
  return (t * t + 2.0 * std::cos(t) - 2.0) / (2.0 * t * t * t * t);
}

// (2θ-3sinθ+θcosθ)/(2θ⁵)
double coeffE(double t) {
  if (t < kSeriesAngle) {
    const double t2 = t * t;
    return 1.0 / 120.0 - t2 / 2520.0 + t2 * t2 / 120960.0 - t2 * t2 * t2 / 9979200.0;
  }
  return (2.0 * t - 3.0 * std::sin(t) + t * std::cos(t)) / (2.0 * std::pow(t, 5));
}

// 1/θ² - (1+cosθ)/(2θ sinθ)
double coeffF(double t) {
  if (t < kSeriesAngleInverse) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0 + t2 * t2 * t2 / 1209600.0;
  }
  return 1.0 / (t * t) - (1.0 + std::cos(t)) / (2.0 * t * std::sin(t));
}

void requireFinite(const Twist& xi) {
  if (!xi.allFinite()) throw MalformedTwistError("twist has non-finite entries");
}

Eigen::Vector3d unskew(const Eigen::Matrix3d& m) {
  return Eigen::Vector3d(m(2, 1), m(0, 2), m(1, 0));
}

Eigen::Matrix3d seQ(const Eigen::Vector3d& rho, const Eigen::Vector3d& phi) {
  const double t = phi.norm();
  const Eigen::Matrix3d r = skew(rho);
  const Eigen::Matrix3d p = skew(phi);
  const Eigen::Matrix3d pr = p * r;
  const Eigen::Matrix3d rp = r * p;
  const Eigen::Matrix3d prp = pr * p;
  return 0.5 * r + coeffC(t) * (pr + rp + prp) +
         coeffD(t) * (p * pr + rp * p - 3.0 * prp) + coeffE(t) * (prp * p + p * prp);
}

}  // namespace

Pose::Pose()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

Pose::Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (!translation.allFinite()) throw ManifoldConstraintError("pose translation is not finite");
  if (!isRotation(rotation)) throw ManifoldConstraintError("pose rotation is not in SO(3)");
}

Pose::Pose(Unchecked, const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
           int steps)
    : rotation_(rotation), translation_(translation), steps_since_projection_(steps) {}

Pose Pose::fromMatrix(const Eigen::Matrix4d& m) {
  const Eigen::RowVector4d bottom = m.row(3);
  if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > kPoseTolerance)
    throw ManifoldConstraintError("homogeneous matrix has a bad bottom row");
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Pose Pose::projected(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation) {
  if (!rotation.allFinite()) throw ManifoldConstraintError("pose rotation is not finite");
  return Pose(projectToSO3(rotation), translation);
}

Pose Pose::planar(double x, double y, double z, double yaw) {
  return Pose(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
              Eigen::Vector3d(x, y, z));
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double Pose::yaw() const { return std::atan2(rotation_(1, 0), rotation_(0, 0)); }

Pose Pose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return Pose(Unchecked{}, rt, -rt * translation_, steps_since_projection_);
}

Pose Pose::operator*(const Pose& other) const {
  Eigen::Matrix3d r = rotation_ * other.rotation_;
  int steps = std::max(steps_since_projection_, other.steps_since_projection_) + 1;
  if (steps >= kRenormalizeEvery) {
    r = projectToSO3(r);
    steps = 0;
  }
  return Pose(Unchecked{}, r, rotation_ * other.translation_ + translation_, steps);
}

Pose Pose::retract(const Twist& xi) const {
  requireFinite(xi);
  const Pose step = expSE3(xi);
  Eigen::Matrix3d r = rotation_ * step.rotation_;
  const Eigen::Vector3d p = rotation_ * step.translation_ + translation_;
  int steps = steps_since_projection_ + 1;
  if (steps >= kRenormalizeEvery) {
    r = projectToSO3(r);
    steps = 0;
  }
  return Pose(Unchecked{}, r, p, steps);
}

MetricWeights::MetricWeights() : gamma_(Vector6d::Ones()) {}

MetricWeights::MetricWeights(const Vector6d& gamma) : gamma_(gamma) {
  if (!gamma.allFinite() || gamma.minCoeff() <= 0.0)
    throw ManifoldConstraintError("metric weights must be finite and strictly positive");
}

MetricWeights MetricWeights::standard() {
  Vector6d g;
  g << 1.0, 1.0, 1.0, 0.1, 0.1, 0.1;
  return MetricWeights(g);
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix4d hat(const Twist& xi) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = skew(xi.tail<3>());
  m.topRightCorner<3, 1>() = xi.head<3>();
  return m;
}

Twist vee(const Eigen::Matrix4d& m) {
  constexpr double tol = 1e-12;
  if (m.row(3).cwiseAbs().maxCoeff() > tol)
    throw MalformedTwistError("twist matrix has a nonzero bottom row");
  const Eigen::Matrix3d w = m.topLeftCorner<3, 3>();
  if ((w + w.transpose()).cwiseAbs().maxCoeff() > tol)
    throw MalformedTwistError("twist rotation block is not skew-symmetric");
  return makeTwist(m.topRightCorner<3, 1>(), unskew(w));
}

Eigen::Matrix3d expSO3(const Eigen::Vector3d& phi) {
  const double t = phi.norm();
  const Eigen::Matrix3d p = skew(phi);
  return Eigen::Matrix3d::Identity() + coeffA(t) * p + coeffB(t) * p * p;
}

Eigen::Vector3d logSO3(const Eigen::Matrix3d& rotation) {
  const double c = std::clamp(0.5 * (rotation.trace() - 1.0), -1.0, 1.0);
  const Eigen::Vector3d w = 0.5 * unskew(rotation - rotation.transpose());
  const double s = w.norm();
  const double t = std::atan2(s, c);
  if (t > M_PI - kCutLocusMargin)
    throw CutLocusError("rotation angle is at the cut locus (angle near pi)");
  if (t < 1e-4) {
    const double t2 = t * t;
    return w * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
  }
  return w * (t / s);
}

Eigen::Matrix3d leftJacobianSO3(const Eigen::Vector3d& phi) {
  const double t = phi.norm();
  const Eigen::Matrix3d p = skew(phi);
  return Eigen::Matrix3d::Identity() + coeffB(t) * p + coeffC(t) * p * p;
}

Eigen::Matrix3d leftJacobianInverseSO3(const Eigen::Vector3d& phi) {
  const double t = phi.norm();
  if (t >= M_PI) throw CutLocusError("left Jacobian is singular for rotation angle >= pi");
  const Eigen::Matrix3d p = skew(phi);
  return Eigen::Matrix3d::Identity() - 0.5 * p + coeffF(t) * p * p;
}

Pose expSE3(const Twist& xi) {
  requireFinite(xi);
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  return Pose(expSO3(phi), leftJacobianSO3(phi) * rho);
}

Twist logSE3(const Pose& pose) {
  const Eigen::Vector3d phi = logSO3(pose.rotation());
  const Eigen::Vector3d rho = leftJacobianInverseSO3(phi) * pose.translation();
  return makeTwist(rho, phi);
}

Matrix6d leftJacobianSE3(const Twist& xi) {
  requireFinite(xi);
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  const Eigen::Matrix3d j = leftJacobianSO3(phi);
  Matrix6d out = Matrix6d::Zero();
  out.topLeftCorner<3, 3>() = j;
  out.bottomRightCorner<3, 3>() = j;
  out.topRightCorner<3, 3>() = seQ(rho, phi);
  return out;
}

Matrix6d leftJacobianInverseSE3(const Twist& xi) {
  requireFinite(xi);
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  const Eigen::Matrix3d ji = leftJacobianInverseSO3(phi);
  Matrix6d out = Matrix6d::Zero();
  out.topLeftCorner<3, 3>() = ji;
  out.bottomRightCorner<3, 3>() = ji;
  out.topRightCorner<3, 3>() = -ji * seQ(rho, phi) * ji;
  return out;
}

Matrix6d leftJacobianInverseTransposeSE3(const Twist& xi) {
  return leftJacobianInverseSE3(xi).transpose();
}

Twist relativeTwist(const Pose& from, const Pose& to) {
  const Eigen::Matrix3d rt = from.rotation().transpose();
  const Eigen::Matrix3d r = rt * to.rotation();
  const Eigen::Vector3d p = rt * (to.translation() - from.translation());
  const Eigen::Vector3d phi = logSO3(r);
  return makeTwist(leftJacobianInverseSO3(phi) * p, phi);
}

double dist2(const Pose& x, const Pose& y, const MetricWeights& weights) {
  return weights.quadratic(relativeTwist(x, y));
}

Eigen::Matrix3d projectToSO3(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

bool isRotation(const Eigen::Matrix3d& m, double tolerance) {
  if (!m.allFinite()) return false;
  const double orth = (m.transpose() * m - Eigen::Matrix3d::Identity()).norm();
  return orth <= tolerance && std::abs(m.determinant() - 1.0) <= tolerance;
}

}  // namespace riemcon::manifold
