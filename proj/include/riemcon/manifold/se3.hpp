#pragma once

/** SE(3) kernels: hat/vee, Rodrigues exponential, logarithm, left Jacobians
 * and the Gamma-weighted squared distance used by the planner.
 *
 * Twists are ordered linear-first, xi = [rho; theta]. Perturbations are
 * applied on the right (body frame): Exp_X(xi) = X * exp(xi^).
 */

#include <Eigen/Dense>
#include <array>

namespace riemcon::manifold {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Body twist [rho; theta]: rows 0-2 linear, rows 3-5 angular.
using Twist = Vector6d;

inline Eigen::Vector3d linearPart(const Twist& xi) { return xi.head<3>(); }
inline Eigen::Vector3d angularPart(const Twist& xi) { return xi.tail<3>(); }
inline Twist makeTwist(const Eigen::Vector3d& rho, const Eigen::Vector3d& theta) {
  Twist xi;
  xi << rho, theta;
  return xi;
}

/// Rotations whose angle is within this margin of pi are treated as lying on
/// the cut locus.
inline constexpr double kCutLocusMargin = 1e-6;

/// Tolerance on ||R^T R - I|| and |det R - 1|.
inline constexpr double kPoseTolerance = 1e-9;

/// Number of chained retractions after which the rotation is re-projected
/// onto SO(3).
inline constexpr int kRenormalizeEvery = 100;

class Pose {
 public:
  Pose();
  /// Throws ManifoldConstraintError unless R is a rotation within
  /// kPoseTolerance and all entries are finite.
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Pose identity() { return Pose(); }
  static Pose fromMatrix(const Eigen::Matrix4d& m);
  /// Projects an approximately orthonormal matrix onto SO(3) first.
  static Pose projected(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);
  /// Ground-plane pose: yaw about +z at position (x, y, z).
  static Pose planar(double x, double y, double z, double yaw);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  Eigen::Matrix4d matrix() const;
  double yaw() const;

  Pose inverse() const;
  Pose operator*(const Pose& other) const;
  Eigen::Vector3d transformPoint(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  /// X * exp(xi^). Every kRenormalizeEvery chained calls the rotation is
  /// polar-projected to bound drift.
  Pose retract(const Twist& xi) const;

  int stepsSinceProjection() const { return steps_since_projection_; }

 private:
  struct Unchecked {};
  Pose(Unchecked, const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
       int steps);

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
  int steps_since_projection_ = 0;
};

/// Diagonal of Gamma; all entries strictly positive.
class MetricWeights {
 public:
  MetricWeights();  // identity
  explicit MetricWeights(const Vector6d& gamma);

  /// diag(1,1,1,0.1,0.1,0.1), the value used throughout the experiments.
  static MetricWeights standard();

  const Vector6d& gamma() const { return gamma_; }
  Matrix6d matrix() const { return gamma_.asDiagonal(); }
  double quadratic(const Twist& xi) const { return xi.dot(gamma_.cwiseProduct(xi)); }

 private:
  Vector6d gamma_;
};

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

Eigen::Matrix4d hat(const Twist& xi);
/// Inverse of hat. Throws MalformedTwistError unless the bottom row is zero
/// and the rotation block is skew-symmetric within 1e-12.
Twist vee(const Eigen::Matrix4d& m);

Eigen::Matrix3d expSO3(const Eigen::Vector3d& phi);
/// Throws CutLocusError when the rotation angle is within kCutLocusMargin of pi.
Eigen::Vector3d logSO3(const Eigen::Matrix3d& rotation);

Eigen::Matrix3d leftJacobianSO3(const Eigen::Vector3d& phi);
Eigen::Matrix3d leftJacobianInverseSO3(const Eigen::Vector3d& phi);

Pose expSE3(const Twist& xi);
Twist logSE3(const Pose& pose);

Matrix6d leftJacobianSE3(const Twist& xi);
Matrix6d leftJacobianInverseSE3(const Twist& xi);
/// J_L(xi)^{-T}. Throws CutLocusError when ||theta|| >= pi.
Matrix6d leftJacobianInverseTransposeSE3(const Twist& xi);

/// xi_{X,Y} = log(X^{-1} Y)^vee.
Twist relativeTwist(const Pose& from, const Pose& to);

/// xi^T Gamma xi with xi = relativeTwist(x, y).
double dist2(const Pose& x, const Pose& y, const MetricWeights& weights);

/// Nearest rotation in the Frobenius sense (polar factor with det = +1).
Eigen::Matrix3d projectToSO3(const Eigen::Matrix3d& m);

bool isRotation(const Eigen::Matrix3d& m, double tolerance = kPoseTolerance);

}  // namespace riemcon::manifold
