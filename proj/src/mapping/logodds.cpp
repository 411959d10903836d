#include "riemcon/mapping/logodds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riemcon/errors.hpp"

namespace riemcon::mapping {

namespace {

void requireSameLength(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  if (a.size() != b.size())
    throw DimensionError(std::string(what) + ": length " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.size() < 2) throw DimensionError(std::string(what) + ": need at least two classes");
}

Eigen::VectorXd peakedLogPmf(int classes_plus_one, int peak, double mass) {
  const double rest = (1.0 - mass) / (classes_plus_one - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Constant(classes_plus_one, std::log(rest));
  out(peak) = std::log(mass);
  return out;
}

}  // namespace

Eigen::VectorXd softmax(const Eigen::VectorXd& h) {
  const Eigen::ArrayXd e = (h.array() - h.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd logOdds(const Eigen::VectorXd& p) {
  if (p.size() < 2) throw DimensionError("logOdds: need at least two classes");
  if ((p.array() <= 0.0).any()) throw DimensionError("logOdds: probabilities must be positive");
  Eigen::VectorXd h = (p.array().log() - std::log(p(0))).matrix();
  h(0) = 0.0;
  return h;
}

double mapObjective(const Eigen::VectorXd& h, const Eigen::VectorXd& log_q) {
  requireSameLength(h, log_q, "mapObjective");
  const double m = h.maxCoeff();
  const Eigen::ArrayXd e = (h.array() - m).exp();
  const double s = e.sum();
  const Eigen::ArrayXd log_sigma = h.array() - m - std::log(s);
  return ((e / s) * (log_q.array() - log_sigma)).sum();
}

Eigen::VectorXd mapLocalGradient(const Eigen::VectorXd& h_tilde, const Eigen::VectorXd& log_q) {
  requireSameLength(h_tilde, log_q, "mapLocalGradient");
  const Eigen::ArrayXd delta = (h_tilde - log_q).array();
  const Eigen::ArrayXd e = (h_tilde.array() - h_tilde.maxCoeff()).exp();
  const double s = e.sum();
  const double gamma = (e * delta).sum();
  const Eigen::ArrayXd beta = s * delta;
  return ((gamma - beta) * e / (s * s)).matrix();
}

Eigen::VectorXd mapConsensusStep(const Eigen::VectorXd& h,
                                 const std::vector<std::pair<double, Eigen::VectorXd>>& neighbors,
                                 double eps) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.size());
  for (const auto& [w, hj] : neighbors) {
    if (hj.size() != h.size())
      throw DimensionError("mapConsensusStep: neighbor length " + std::to_string(hj.size()) +
                           " vs " + std::to_string(h.size()));
    acc += w * (hj - h);
  }
  return h + eps * acc;
}

double entropy(const Eigen::VectorXd& h) {
  const double m = h.maxCoeff();
  const Eigen::ArrayXd e = (h.array() - m).exp();
  const double s = e.sum();
  const Eigen::ArrayXd log_p = h.array() - m - std::log(s);
  return -((e / s) * log_p).sum();
}

int argmaxClass(const Eigen::VectorXd& h) {
  int best = 0;
  for (int c = 1; c < h.size(); ++c)
    if (h(c) > h(best)) best = c;
  return best;
}

void InverseModelParams::validate(int classes_plus_one) const {
  std::vector<std::string> problems;
  if (classes_plus_one < 2) problems.push_back("inverse model needs at least two classes");
  const double floor_hit = 1.0 / std::max(classes_plus_one, 1);
  if (!(hit_confidence > floor_hit && hit_confidence < 1.0))
    problems.push_back("hit_confidence " + std::to_string(hit_confidence) + " must lie in (" +
                       std::to_string(floor_hit) + ", 1)");
  if (!(free_confidence > 0.5 && free_confidence < 1.0))
    problems.push_back("free_confidence " + std::to_string(free_confidence) +
                       " must lie in (0.5, 1)");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

Eigen::VectorXd hitLogLikelihood(const InverseModelParams& params, int classes_plus_one,
                                 int category) {
  if (category < 0 || category >= classes_plus_one)
    throw DimensionError("category " + std::to_string(category) + " outside 0.." +
                         std::to_string(classes_plus_one - 1));
  return peakedLogPmf(classes_plus_one, category, params.hit_confidence);
}

Eigen::VectorXd freeLogLikelihood(const InverseModelParams& params, int classes_plus_one) {
  return peakedLogPmf(classes_plus_one, 0, params.free_confidence);
}

}  // namespace riemcon::mapping
