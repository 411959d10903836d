#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace riemcon::mapping {

/// Softmax with a max shift, so large log-odds do not overflow.
Eigen::VectorXd softmax(const Eigen::VectorXd& h);

/// Log-odds relative to class 0: h(c) = log p(c) - log p(0).
Eigen::VectorXd logOdds(const Eigen::VectorXd& p);

/// f(h) = sum_c sigma_c(h) (log q(c) - log sigma_c(h)). Equals -KL(sigma(h) || q)
/// when q is normalized.
double mapObjective(const Eigen::VectorXd& h, const Eigen::VectorXd& log_q);

/// Gradient of mapObjective at h_tilde, evaluated through the gamma/beta form.
Eigen::VectorXd mapLocalGradient(const Eigen::VectorXd& h_tilde, const Eigen::VectorXd& log_q);

/// h + eps * sum_j w_j (h_j - h).
Eigen::VectorXd mapConsensusStep(const Eigen::VectorXd& h,
                                 const std::vector<std::pair<double, Eigen::VectorXd>>& neighbors,
                                 double eps);

/// Shannon entropy of sigma(h) in nats.
double entropy(const Eigen::VectorXd& h);

/// Index of the largest entry; ties go to the lowest index.
int argmaxClass(const Eigen::VectorXd& h);

struct InverseModelParams {
  double hit_confidence = 0.9;
  double free_confidence = 0.7;

  /// Throws ConfigError unless hit_confidence is in (1/(C+1), 1) and
  /// free_confidence in (1/2, 1).
  void validate(int classes_plus_one) const;
};

/// Normalized log q(m | z) for a cell hit by a ray of the given category.
Eigen::VectorXd hitLogLikelihood(const InverseModelParams& params, int classes_plus_one,
                                 int category);
/// Normalized log q(m | z) for a cell the ray passed through.
Eigen::VectorXd freeLogLikelihood(const InverseModelParams& params, int classes_plus_one);

}  // namespace riemcon::mapping
