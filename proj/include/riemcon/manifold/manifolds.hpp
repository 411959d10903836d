#pragma once

#include <Eigen/Dense>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "riemcon/errors.hpp"
#include "riemcon/manifold/se3.hpp"

namespace riemcon::manifold {

/// Operations every manifold policy provides. Tangent vectors are Eigen
/// column vectors so that they support scaling and addition directly.
template <class M>
concept RiemannianManifold = requires(const M& m, const typename M::Point& x,
                                      const typename M::Tangent& v) {
  { m.exp(x, v) } -> std::convertible_to<typename M::Point>;
  { m.log(x, x) } -> std::convertible_to<typename M::Tangent>;
  { m.dist2(x, x) } -> std::convertible_to<double>;
  { m.inner(x, v, v) } -> std::convertible_to<double>;
  { m.zeroTangent(x) } -> std::convertible_to<typename M::Tangent>;
  { m.transport(x, x, v) } -> std::convertible_to<typename M::Tangent>;
  { m.loopDefect(x, x, x, x) } -> std::convertible_to<typename M::Tangent>;
  { m.validate(x) };
  { m.curvatureRatio() } -> std::convertible_to<std::optional<double>>;
};

template <RiemannianManifold M>
double tangentNorm(const M& m, const typename M::Point& x, const typename M::Tangent& v) {
  return std::sqrt(std::max(0.0, m.inner(x, v, v)));
}

/// Loop defect built from logs and transports into T_{x_i}M. Used as the default
/// loop defect by manifolds without a closed form.
template <class M>
typename M::Tangent genericLoopDefect(const M& m, const typename M::Point& xi,
                                      const typename M::Point& xj,
                                      const typename M::Point& yj,
                                      const typename M::Point& yi) {
  const auto vx = m.log(xi, xj);
  const auto vxyj = m.transport(xj, xi, m.log(xj, yj));
  const auto vxyi = m.log(xi, yi);
  const auto vy = m.transport(yi, xi, m.log(yi, yj));
  return vx + vxyj - vxyi - vy;
}

/// Ratio ||v_xy|| / min{||v_x||, ||v_y||, ||v_xy^i||, ||v_xy^j||}. Returns
/// nullopt when the denominator vanishes.
template <RiemannianManifold M>
std::optional<double> loopRatio(const M& m, const typename M::Point& xi,
                                const typename M::Point& xj, const typename M::Point& yj,
                                const typename M::Point& yi) {
  const double num = tangentNorm(m, xi, m.loopDefect(xi, xj, yj, yi));
  const double den = std::min({tangentNorm(m, xi, m.log(xi, xj)),
                               tangentNorm(m, yi, m.log(yi, yj)),
                               tangentNorm(m, xi, m.log(xi, yi)),
                               tangentNorm(m, xj, m.log(xj, yj))});
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

class Euclidean {
 public:
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;

  explicit Euclidean(int dim);

  int dim() const { return dim_; }
  int tangentSize() const { return dim_; }

  Point exp(const Point& x, const Tangent& v) const;
  Tangent log(const Point& x, const Point& y) const;
  double dist2(const Point& x, const Point& y) const;
  double inner(const Point& x, const Tangent& u, const Tangent& v) const;
  Tangent zeroTangent(const Point& x) const;
  Tangent transport(const Point& from, const Point& to, const Tangent& v) const;
  Tangent loopDefect(const Point& xi, const Point& xj, const Point& yj, const Point& yi) const;
  void validate(const Point& x) const;
  std::optional<double> curvatureRatio() const { return 0.0; }

 private:
  void checkSize(const Eigen::VectorXd& v, const char* what) const;
  int dim_;
};

/// Unit vector in R^2.
class CirclePoint {
 public:
  CirclePoint() : direction_(1.0, 0.0) {}
  /// Throws ManifoldConstraintError unless | ||d|| - 1 | <= 1e-12.
  explicit CirclePoint(const Eigen::Vector2d& direction);
  static CirclePoint fromAngle(double angle);
  /// Normalizes an arbitrary nonzero vector.
  static CirclePoint normalized(const Eigen::Vector2d& v);

  const Eigen::Vector2d& direction() const { return direction_; }
  double angle() const { return std::atan2(direction_.y(), direction_.x()); }

 private:
  Eigen::Vector2d direction_;
};

/// S^1 with tangents stored as ambient 2-vectors orthogonal to the base point.
class Circle {
 public:
  using Point = CirclePoint;
  using Tangent = Eigen::Vector2d;

  int tangentSize() const { return 2; }

  Point exp(const Point& x, const Tangent& v) const;
  /// Throws CutLocusError when y = -x.
  Tangent log(const Point& x, const Point& y) const;
  double dist2(const Point& x, const Point& y) const;
  double inner(const Point& x, const Tangent& u, const Tangent& v) const;
  Tangent zeroTangent(const Point& x) const;
  Tangent transport(const Point& from, const Point& to, const Tangent& v) const;
  /// The net angle around the loop, wrapped to (-pi, pi], lifted to T_{xi}.
  Tangent loopDefect(const Point& xi, const Point& xj, const Point& yj, const Point& yi) const;
  void validate(const Point&) const {}
  std::optional<double> curvatureRatio() const { return 0.0; }

  /// Signed angle of the tangent v at x (its coordinate along the unit
  /// tangent direction).
  static double tangentAngle(const Point& x, const Tangent& v);
  static Eigen::Vector2d unitTangent(const Point& x);
};

/// SE(3) with the left-invariant metric weighted by Gamma. Transport is the
/// one induced by left translation, so body twists carry over unchanged.
class SE3Manifold {
 public:
  using Point = Pose;
  using Tangent = Twist;

  explicit SE3Manifold(MetricWeights weights = MetricWeights::standard(),
                       std::optional<double> curvature_ratio = std::nullopt)
      : weights_(weights), rho_(curvature_ratio) {}

  int tangentSize() const { return 6; }
  const MetricWeights& weights() const { return weights_; }

  Point exp(const Point& x, const Tangent& v) const { return x.retract(v); }
  Tangent log(const Point& x, const Point& y) const { return relativeTwist(x, y); }
  double dist2(const Point& x, const Point& y) const {
    return manifold::dist2(x, y, weights_);
  }
  double inner(const Point&, const Tangent& u, const Tangent& v) const {
    return u.dot(weights_.gamma().cwiseProduct(v));
  }
  Tangent zeroTangent(const Point&) const { return Tangent::Zero(); }
  Tangent transport(const Point&, const Point&, const Tangent& v) const { return v; }
  Tangent loopDefect(const Point& xi, const Point& xj, const Point& yj, const Point& yi) const {
    return genericLoopDefect(*this, xi, xj, yj, yi);
  }
  void validate(const Point& x) const {
    if (!isRotation(x.rotation()) || !x.translation().allFinite())
      throw ManifoldConstraintError("pose left SE(3)");
  }
  /// Unknown unless supplied, e.g. from sampled loop ratios.
  std::optional<double> curvatureRatio() const { return rho_; }

 private:
  MetricWeights weights_;
  std::optional<double> rho_;
};

/// Product M^n. Points are vectors of component points; tangents are the
/// component tangents stacked into one column.
template <RiemannianManifold M>
class PowerManifold {
 public:
  using Point = std::vector<typename M::Point>;
  using Tangent = Eigen::VectorXd;

  PowerManifold(M base, int count) : base_(std::move(base)), count_(count) {
    if (count <= 0) throw DimensionError("power manifold needs at least one factor");
  }

  const M& base() const { return base_; }
  int count() const { return count_; }
  int tangentSize() const { return count_ * base_.tangentSize(); }

  typename M::Tangent component(const Tangent& v, int k) const {
    const int s = base_.tangentSize();
    return v.segment(k * s, s);
  }

  Point exp(const Point& x, const Tangent& v) const {
    check(x, v);
    Point out;
    out.reserve(count_);
    for (int k = 0; k < count_; ++k) out.push_back(base_.exp(x[k], component(v, k)));
    return out;
  }
  Tangent log(const Point& x, const Point& y) const {
    return stack(x, y, [&](int k) { return base_.log(x[k], y[k]); });
  }
  double dist2(const Point& x, const Point& y) const {
    checkPoint(x);
    checkPoint(y);
    double s = 0.0;
    for (int k = 0; k < count_; ++k) s += base_.dist2(x[k], y[k]);
    return s;
  }
  double inner(const Point& x, const Tangent& u, const Tangent& v) const {
    check(x, u);
    check(x, v);
    double s = 0.0;
    for (int k = 0; k < count_; ++k) s += base_.inner(x[k], component(u, k), component(v, k));
    return s;
  }
  Tangent zeroTangent(const Point& x) const {
    checkPoint(x);
    return Tangent::Zero(tangentSize());
  }
  Tangent transport(const Point& from, const Point& to, const Tangent& v) const {
    return stack(from, to, [&](int k) { return base_.transport(from[k], to[k], component(v, k)); });
  }
  Tangent loopDefect(const Point& xi, const Point& xj, const Point& yj, const Point& yi) const {
    checkPoint(yj);
    checkPoint(yi);
    return stack(xi, xj, [&](int k) { return base_.loopDefect(xi[k], xj[k], yj[k], yi[k]); });
  }
  void validate(const Point& x) const {
    checkPoint(x);
    for (const auto& p : x) base_.validate(p);
  }
  std::optional<double> curvatureRatio() const { return base_.curvatureRatio(); }

 private:
  void checkPoint(const Point& x) const {
    if (static_cast<int>(x.size()) != count_)
      throw DimensionError("power manifold point has " + std::to_string(x.size()) +
                           " components, expected " + std::to_string(count_));
  }
  void check(const Point& x, const Tangent& v) const {
    checkPoint(x);
    if (v.size() != tangentSize())
      throw DimensionError("power manifold tangent has wrong length");
  }
  template <class F>
  Tangent stack(const Point& a, const Point& b, F&& f) const {
    checkPoint(a);
    checkPoint(b);
    const int s = base_.tangentSize();
    Tangent out(tangentSize());
    for (int k = 0; k < count_; ++k) out.segment(k * s, s) = f(k);
    return out;
  }

  M base_;
  int count_;
};

static_assert(RiemannianManifold<Euclidean>);
static_assert(RiemannianManifold<Circle>);
static_assert(RiemannianManifold<SE3Manifold>);
static_assert(RiemannianManifold<PowerManifold<Circle>>);

}  // namespace riemcon::manifold
