#include "entprop/glm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "entprop/errors.hpp"

namespace entprop {
namespace {

constexpr double kCoefChangeTol = 1e-10;
constexpr int kMaxIterations = 100;
constexpr double kDivergenceNorm = 1e3;
constexpr double kJitter = 1e-12;

// log(expit(eta)) without overflow.
double log_expit(double eta) {
  return eta < 0 ? eta - std::log1p(std::exp(eta)) : -std::log1p(std::exp(-eta));
}

double logistic_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double log_mu = log_expit(eta[i]);
    const double log_one_minus_mu = log_expit(-eta[i]);
    dev += y[i] * log_mu + (1.0 - y[i]) * log_one_minus_mu;
  }
  return -2.0 * dev;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double mu = std::exp(std::min(eta[i], 40.0));
    dev += (y[i] > 0 ? y[i] * std::log(y[i] / mu) : 0.0) - (y[i] - mu);
  }
  return 2.0 * dev;
}

Eigen::VectorXd solve_weighted_normal_equations(const Eigen::MatrixXd& design,
                                                const Eigen::VectorXd& weights,
                                                const Eigen::VectorXd& residual) {
  const Eigen::MatrixXd hessian =
      design.transpose() * weights.asDiagonal() * design;
  const Eigen::VectorXd grad = design.transpose() * residual;
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() == Eigen::Success) {
    return llt.solve(grad);
  }
  Eigen::MatrixXd jittered = hessian;
  jittered.diagonal().array() += kJitter;
  llt.compute(jittered);
  if (llt.info() != Eigen::Success) {
    throw RankError("glm: weighted normal equations are singular");
  }
  return llt.solve(grad);
}

enum class Family { Logistic, Poisson };

GlmFit irls(Family family, const Eigen::VectorXd& y, const Eigen::MatrixXd& design) {
  const Eigen::Index n = y.size();
  const Eigen::Index p = design.cols();
  if (design.rows() != n) {
    throw std::invalid_argument("glm: design rows must match response length");
  }
  if (p >= n) {
    throw std::invalid_argument("glm: need more observations than coefficients");
  }
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design).rank() < p) {
    throw RankError("glm: design matrix is rank-deficient");
  }

  const auto deviance_at = [&](const Eigen::VectorXd& eta) {
    return family == Family::Logistic ? logistic_deviance(y, eta)
                                      : poisson_deviance(y, eta);
  };

  GlmFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = design * fit.coefficients;
  double deviance = deviance_at(eta);
  fit.deviance_history.push_back(deviance);

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    Eigen::VectorXd mu(n), weights(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (family == Family::Logistic) {
        mu[i] = expit(eta[i]);
        weights[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-300);
      } else {
        mu[i] = std::exp(std::min(eta[i], 40.0));
        weights[i] = std::max(mu[i], 1e-300);
      }
    }
    const Eigen::VectorXd step =
        solve_weighted_normal_equations(design, weights, y - mu);

    // Step halving keeps the deviance non-increasing.
    double scale = 1.0;
    Eigen::VectorXd candidate;
    Eigen::VectorXd candidate_eta;
    double candidate_dev = 0.0;
    for (int halving = 0; halving < 40; ++halving) {
      candidate = fit.coefficients + scale * step;
      candidate_eta = design * candidate;
      candidate_dev = deviance_at(candidate_eta);
      if (candidate_dev <= deviance + 1e-12) break;
      scale *= 0.5;
    }

    const double change = (scale * step).cwiseAbs().maxCoeff();
    fit.coefficients = candidate;
    eta = candidate_eta;
    deviance = candidate_dev;
    fit.iterations = iter;
    fit.deviance_history.push_back(deviance);

    if (fit.coefficients.norm() > kDivergenceNorm) {
      throw SeparationError("glm: coefficients diverged (separation or degenerate response)");
    }
    if (change < kCoefChangeTol) {
      fit.converged = true;
      break;
    }
  }

  // A saturated likelihood that is still moving means the maximizer sits at
  // infinity: the coefficient norm grows without bound even though each
  // iterate stays finite.
  if (!fit.converged && deviance < 1e-8) {
    throw SeparationError("glm: saturated likelihood, coefficients diverge");
  }

  fit.deviance = deviance;
  return fit;
}

}  // namespace

GlmFit fit_logistic(const Eigen::VectorXd& responses, const Eigen::MatrixXd& design) {
  for (Eigen::Index i = 0; i < responses.size(); ++i) {
    if (responses[i] != 0.0 && responses[i] != 1.0) {
      throw std::invalid_argument("fit_logistic: responses must be 0/1");
    }
  }
  if (responses.size() > 0 &&
      (responses.array() == responses[0]).all()) {
    throw SeparationError("fit_logistic: all responses equal, no finite maximizer");
  }
  return irls(Family::Logistic, responses, design);
}

GlmFit fit_poisson(const Eigen::VectorXd& counts, const Eigen::MatrixXd& design) {
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0.0) {
      throw std::invalid_argument("fit_poisson: counts must be nonnegative");
    }
  }
  if (counts.size() > 0 && (counts.array() == 0.0).all()) {
    throw DegenerateDataError("fit_poisson: all counts zero, intercept diverges");
  }
  return irls(Family::Poisson, counts, design);
}

}  // namespace entprop
