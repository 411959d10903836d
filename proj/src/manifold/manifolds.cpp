#include "riemcon/manifold/manifolds.hpp"

#include <cmath>

namespace riemcon::manifold {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kTangentTolerance = 1e-9;

double wrapAngle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Euclidean::Euclidean(int dim) : dim_(dim) {
  if (dim <= 0) throw DimensionError("Euclidean dimension must be positive");
}

void Euclidean::checkSize(const Eigen::VectorXd& v, const char* what) const {
  if (v.size() != dim_)
    throw DimensionError(std::string(what) + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim_));
}

Euclidean::Point Euclidean::exp(const Point& x, const Tangent& v) const {
  checkSize(x, "point");
  checkSize(v, "tangent");
  return x + v;
}

Euclidean::Tangent Euclidean::log(const Point& x, const Point& y) const {
  checkSize(x, "point");
  checkSize(y, "point");
  return y - x;
}

double Euclidean::dist2(const Point& x, const Point& y) const { return log(x, y).squaredNorm(); }

double Euclidean::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  checkSize(x, "point");
  checkSize(u, "tangent");
  checkSize(v, "tangent");
  return u.dot(v);
}

Euclidean::Tangent Euclidean::zeroTangent(const Point& x) const {
  checkSize(x, "point");
  return Tangent::Zero(dim_);
}

Euclidean::Tangent Euclidean::transport(const Point& from, const Point& to,
                                        const Tangent& v) const {
  checkSize(from, "point");
  checkSize(to, "point");
  checkSize(v, "tangent");
  return v;
}

Euclidean::Tangent Euclidean::loopDefect(const Point& xi, const Point& xj, const Point& yj,
                                         const Point& yi) const {
  checkSize(xi, "point");
  checkSize(xj, "point");
  checkSize(yj, "point");
  checkSize(yi, "point");
  // The four displacements telescope; returning the literal sum would only
  // add rounding noise.
  return Tangent::Zero(dim_);
}

void Euclidean::validate(const Point& x) const {
  checkSize(x, "point");
  if (!x.allFinite()) throw ManifoldConstraintError("Euclidean point is not finite");
}

CirclePoint::CirclePoint(const Eigen::Vector2d& direction) : direction_(direction) {
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > kUnitTolerance)
    throw ManifoldConstraintError("circle point must have unit norm");
}

CirclePoint CirclePoint::fromAngle(double angle) {
  return CirclePoint::normalized(Eigen::Vector2d(std::cos(angle), std::sin(angle)));
}

CirclePoint CirclePoint::normalized(const Eigen::Vector2d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw ManifoldConstraintError("cannot normalize a zero or non-finite vector onto the circle");
  return CirclePoint(v / n);
}

Eigen::Vector2d Circle::unitTangent(const Point& x) {
  return Eigen::Vector2d(-x.direction().y(), x.direction().x());
}

double Circle::tangentAngle(const Point& x, const Tangent& v) {
  return v.dot(unitTangent(x));
}

Circle::Point Circle::exp(const Point& x, const Tangent& v) const {
  if (!v.allFinite()) throw ManifoldConstraintError("circle tangent is not finite");
  const double n = v.norm();
  if (std::abs(x.direction().dot(v)) > kTangentTolerance * (1.0 + n))
    throw ManifoldConstraintError("circle tangent is not orthogonal to its base point");
  if (n == 0.0) return x;
  return CirclePoint::normalized(std::cos(n) * x.direction() + std::sin(n) * (v / n));
}

Circle::Tangent Circle::log(const Point& x, const Point& y) const {
  const Eigen::Vector2d t = unitTangent(x);
  const double c = x.direction().dot(y.direction());
  const double s = t.dot(y.direction());
  if (c < 0.0 && std::abs(s) <= kUnitTolerance)
    throw CutLocusError("circle logarithm of an antipodal point");
  return std::atan2(s, c) * t;
}

double Circle::dist2(const Point& x, const Point& y) const {
  const double c = x.direction().dot(y.direction());
  const double s = unitTangent(x).dot(y.direction());
  if (c < 0.0 && std::abs(s) <= kUnitTolerance)
    throw CutLocusError("circle distance to an antipodal point");
  const double a = std::atan2(s, c);
  return a * a;
}

double Circle::inner(const Point&, const Tangent& u, const Tangent& v) const { return u.dot(v); }

Circle::Tangent Circle::zeroTangent(const Point&) const { return Tangent::Zero(); }

Circle::Tangent Circle::transport(const Point& from, const Point& to, const Tangent& v) const {
  return tangentAngle(from, v) * unitTangent(to);
}

Circle::Tangent Circle::loopDefect(const Point& xi, const Point& xj, const Point& yj,
                                   const Point& yi) const {
  const double net = tangentAngle(xi, log(xi, xj)) + tangentAngle(xj, log(xj, yj)) -
                     tangentAngle(xi, log(xi, yi)) - tangentAngle(yi, log(yi, yj));
  // Going once around the circle is the same point, so a full winding is no
  // displacement at all.
  return wrapAngle(net) * unitTangent(xi);
}

}  // namespace riemcon::manifold
