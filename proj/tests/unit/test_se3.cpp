#include <gtest/gtest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "riemcon/errors.hpp"
#include "riemcon/manifold/se3.hpp"

using namespace riemcon;
using namespace riemcon::manifold;

namespace {

Twist randomTwist(std::mt19937_64& rng, double max_angle, double max_trans = 2.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, max_angle);
  Eigen::Vector3d axis(u(rng), u(rng), u(rng));
  axis.normalize();
  Eigen::Vector3d rho(u(rng), u(rng), u(rng));
  return makeTwist(max_trans * rho, ang(rng) * axis);
}

Eigen::Matrix4d oracleExp(const Twist& xi) { return hat(xi).exp(); }

}  // namespace

TEST(SE3, HatOfZeroIsZero) { EXPECT_TRUE(hat(Twist::Zero()).isZero(0.0)); }

TEST(SE3, HatOfPureTranslation) {
  Twist xi;
  xi << 1, 2, 3, 0, 0, 0;
  const Eigen::Matrix4d m = hat(xi);
  EXPECT_EQ(Eigen::Vector3d(m.topRightCorner<3, 1>()), Eigen::Vector3d(1, 2, 3));
  EXPECT_TRUE((m.topLeftCorner<3, 3>().isZero(0.0)));
  EXPECT_TRUE(m.row(3).isZero(0.0));
}

TEST(SE3, VeeInvertsHatExactly) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Twist xi = randomTwist(rng, 3.0, 5.0);
    EXPECT_EQ(vee(hat(xi)), xi);
  }
}

TEST(SE3, VeeRejectsMalformedMatrix) {
  Eigen::Matrix4d m = hat(Twist::Ones());
  m(3, 0) = 1e-6;
  EXPECT_THROW(vee(m), MalformedTwistError);
  m = hat(Twist::Ones());
  m(0, 0) = 0.5;
  EXPECT_THROW(vee(m), MalformedTwistError);
}

TEST(SE3, ExpMatchesMatrixExponentialOracle) {
  Twist quarter = Twist::Zero();
  quarter(5) = M_PI / 2;
  const Pose q = expSE3(quarter);
  Eigen::Matrix3d rz;
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((q.rotation() - rz).norm(), 1e-10);
  EXPECT_LE(q.translation().norm(), 1e-15);
  EXPECT_LE((q.matrix() - oracleExp(quarter)).norm(), 1e-10);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const double max_angle = (i % 3 == 0) ? 1e-3 : 3.0;
    const Twist xi = randomTwist(rng, max_angle);
    EXPECT_LE((expSE3(xi).matrix() - oracleExp(xi)).norm(), 1e-10) << "sample " << i;
  }
}

TEST(SE3, ExpAtZeroIsIdentity) {
  const Pose x = Pose::planar(1.0, -2.0, 0.5, 0.3);
  const Pose y = x.retract(Twist::Zero());
  EXPECT_LE((y.matrix() - x.matrix()).norm(), 1e-15);
}

TEST(SE3, LogExpRoundTripOnRandomPairs) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Pose x = expSE3(randomTwist(rng, 3.0, 5.0));
    const Pose y = x.retract(randomTwist(rng, 2.5, 5.0));
    const Pose back = x.retract(relativeTwist(x, y));
    worst = std::max(worst, (back.matrix() - y.matrix()).norm());
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(SE3, LogInvertsExpNearIdentity) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Twist xi = randomTwist(rng, 1e-7, 1e-3);
    EXPECT_LE((logSE3(expSE3(xi)) - xi).norm(), 1e-15 + 1e-12 * xi.norm());
  }
}

TEST(SE3, LogThrowsAtCutLocus) {
  Twist xi = Twist::Zero();
  xi(3) = M_PI;
  const Pose flipped = expSE3(xi);
  EXPECT_THROW(logSE3(flipped), CutLocusError);
  EXPECT_THROW(relativeTwist(Pose(), flipped), CutLocusError);
}

TEST(SE3, QuarterTurnDistanceUsesAngularWeight) {
  const Pose x = Pose::planar(0, 0, 0, 0.0);
  const Pose y = Pose::planar(0, 0, 0, M_PI / 2);
  EXPECT_NEAR(dist2(x, y, MetricWeights::standard()), 0.1 * (M_PI / 2) * (M_PI / 2), 1e-14);
  EXPECT_EQ(dist2(x, x, MetricWeights::standard()), 0.0);
}

TEST(SE3, DistanceIsSymmetricAndLeftInvariant) {
  std::mt19937_64 rng(77);
  const MetricWeights w = MetricWeights::standard();
  for (int i = 0; i < 1000; ++i) {
    const Pose x = expSE3(randomTwist(rng, 3.0, 5.0));
    const Pose y = x.retract(randomTwist(rng, 2.5, 5.0));
    const Pose z = expSE3(randomTwist(rng, 3.0, 5.0));
    const double d = dist2(x, y, w);
    EXPECT_NEAR(dist2(y, x, w), d, 1e-9);
    EXPECT_NEAR(dist2(z * x, z * y, w), d, 1e-9);
  }
}

TEST(SE3, RelativeTwistReversesSign) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Pose x = expSE3(randomTwist(rng, 3.0));
    const Pose y = x.retract(randomTwist(rng, 2.5));
    EXPECT_LE((relativeTwist(x, y) + relativeTwist(y, x)).norm(), 1e-9);
  }
}

TEST(SE3, LeftJacobianIsIdentityAtZeroAndForPureTranslation) {
  EXPECT_LE((leftJacobianInverseTransposeSE3(Twist::Zero()) - Matrix6d::Identity()).norm(), 0.0);
  Twist xi;
  xi << 0.3, -1.2, 2.0, 0, 0, 0;
  // Q(rho, 0) = rho^/2, so only the off-diagonal block survives.
  const Matrix6d j = leftJacobianSE3(xi);
  EXPECT_LE((j.topLeftCorner<3, 3>() - Eigen::Matrix3d::Identity()).norm(), 1e-15);
  EXPECT_LE((j.topRightCorner<3, 3>() - 0.5 * skew(xi.head<3>())).norm(), 1e-15);
}

TEST(SE3, PureTranslationJacobianMatchesFiniteDifference) {
  Twist xi;
  xi << 0.3, -1.2, 2.0, 0, 0, 0;
  const Matrix6d jinv = leftJacobianInverseSE3(xi);
  const double h = 1e-6;
  for (int k = 0; k < 6; ++k) {
    const Twist e = Twist::Unit(k);
    const Twist plus = logSE3(expSE3(h * e) * expSE3(xi));
    const Twist minus = logSE3(expSE3(-h * e) * expSE3(xi));
    const Twist fd = (plus - minus) / (2 * h);
    EXPECT_LE((fd - jinv.col(k)).norm(), 1e-4 * std::max(1.0, fd.norm()));
  }
}

TEST(SE3, LeftJacobianSatisfiesDefiningRelation) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    Twist xi = randomTwist(rng, 1.0, 2.0);
    xi.tail<3>().normalize();  // ||theta|| = 1
    Twist eta;
    for (int k = 0; k < 6; ++k) eta(k) = u(rng);
    const Twist plus = logSE3(expSE3(h * eta) * expSE3(xi));
    const Twist minus = logSE3(expSE3(-h * eta) * expSE3(xi));
    const Twist fd = (plus - minus) / (2 * h);
    const Twist analytic = leftJacobianInverseSE3(xi) * eta;
    EXPECT_LE((fd - analytic).norm() / analytic.norm(), 1e-4) << "sample " << i;
  }
}

TEST(SE3, JacobianAndInverseAgree) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const double max_angle = (i % 2 == 0) ? 0.3 : 3.0;
    const Twist xi = randomTwist(rng, max_angle, 3.0);
    const Matrix6d prod = leftJacobianSE3(xi) * leftJacobianInverseSE3(xi);
    EXPECT_LE((prod - Matrix6d::Identity()).norm(), 1e-10) << "sample " << i;
  }
}

TEST(SE3, JacobianIsContinuousAcrossSeriesSwitch) {
  Twist below, above;
  const Eigen::Vector3d axis = Eigen::Vector3d(1, 2, -0.5).normalized();
  below << 0.4, -0.7, 1.1, (0.2 - 1e-12) * axis;
  above << 0.4, -0.7, 1.1, (0.2 + 1e-12) * axis;
  EXPECT_LE((leftJacobianSE3(below) - leftJacobianSE3(above)).norm(), 1e-10);
  EXPECT_LE((leftJacobianInverseSE3(below) - leftJacobianInverseSE3(above)).norm(), 1e-10);
  below.tail<3>() = (1e-2 - 1e-12) * axis;
  above.tail<3>() = (1e-2 + 1e-12) * axis;
  EXPECT_LE((leftJacobianInverseSE3(below) - leftJacobianInverseSE3(above)).norm(), 1e-10);
}

TEST(SE3, InverseTransposeRejectsLargeRotation) {
  Twist xi = Twist::Zero();
  xi(4) = M_PI;
  EXPECT_THROW(leftJacobianInverseTransposeSE3(xi), CutLocusError);
}

TEST(SE3, ChainedRetractionsStayOnManifold) {
  std::mt19937_64 rng(123);
  Pose x;
  for (int i = 0; i < 10000; ++i) {
    x = x.retract(randomTwist(rng, 0.5, 0.1));
    ASSERT_TRUE(isRotation(x.rotation(), 1e-9)) << "step " << i;
  }
}

TEST(SE3, PoseRejectsNonRotation) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = -1.0;
  EXPECT_THROW(Pose(m, Eigen::Vector3d::Zero()), ManifoldConstraintError);
  m = Eigen::Matrix3d::Identity() * 1.01;
  EXPECT_THROW(Pose(m, Eigen::Vector3d::Zero()), ManifoldConstraintError);
  EXPECT_NO_THROW(Pose::projected(m, Eigen::Vector3d::Zero()));
}

TEST(SE3, MetricWeightsMustBePositive) {
  Vector6d g = Vector6d::Ones();
  g(4) = 0.0;
  EXPECT_THROW(MetricWeights{g}, ManifoldConstraintError);
}
