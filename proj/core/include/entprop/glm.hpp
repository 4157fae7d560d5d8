// In-house GLM fitting: logistic and Poisson regression by iteratively
// reweighted least squares with step halving, dense Cholesky solves and a
// small jitter fallback. Designs here are tiny (p <= 3), responses may be
// large.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace entprop {

struct GlmFit {
  Eigen::VectorXd coefficients;  // intercept first, matching the design
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;
  std::vector<double> deviance_history;
};

// Bernoulli response with logit link. Throws SeparationError when the
// coefficient norm diverges past 1e3 (perfect separation or all-equal
// responses), RankError for rank-deficient designs.
GlmFit fit_logistic(const Eigen::VectorXd& responses, const Eigen::MatrixXd& design);

// Nonnegative-integer response with log link. All-zero counts throw
// DegenerateDataError; divergence and rank handling as above.
GlmFit fit_poisson(const Eigen::VectorXd& counts, const Eigen::MatrixXd& design);

inline double expit(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace entprop
