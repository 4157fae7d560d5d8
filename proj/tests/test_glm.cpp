#include <doctest.h>

#include <cmath>

#include "entprop/errors.hpp"
#include "entprop/glm.hpp"
#include "entprop/rng.hpp"

using entprop::expit;
using entprop::fit_logistic;
using entprop::fit_poisson;
using entprop::GlmFit;

namespace {

Eigen::MatrixXd with_intercept(const Eigen::VectorXd& x) {
  Eigen::MatrixXd design(x.size(), 2);
  design.col(0).setOnes();
  design.col(1) = x;
  return design;
}

double score_sup_norm(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
                      const Eigen::VectorXd& mu) {
  return (design.transpose() * (y - mu)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("glm") {

TEST_CASE("logistic slope vanishes when treatment ignores the covariate") {
  const int n = 400;
  Eigen::VectorXd y(n), x(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2;              // balanced responses
    x[i] = (i / 2) % 2 ? 1.0 : -1.0;  // orthogonal to the response pattern
  }
  const GlmFit fit = fit_logistic(y, with_intercept(x));
  CHECK(fit.converged);
  CHECK(std::abs(fit.coefficients[1]) < 1e-6);
}

TEST_CASE("logistic parameter recovery on self-simulated data") {
  entprop::Rng rng(501);
  const int n = 10000;
  Eigen::VectorXd y(n), x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.bernoulli(expit(1.0 + 2.0 * x[i])) ? 1.0 : 0.0;
  }
  const GlmFit fit = fit_logistic(y, with_intercept(x));
  CHECK(fit.converged);
  CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("all-equal responses have no finite maximizer") {
  Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
  Eigen::MatrixXd design = Eigen::MatrixXd::Ones(10, 1);
  CHECK_THROWS_AS(fit_logistic(y, design), entprop::SeparationError);
}

TEST_CASE("perfectly separated covariate diverges") {
  const int n = 40;
  Eigen::VectorXd y(n), x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = i < n / 2 ? -1.0 - 0.01 * i : 1.0 + 0.01 * i;
    y[i] = i < n / 2 ? 0.0 : 1.0;
  }
  CHECK_THROWS_AS(fit_logistic(y, with_intercept(x)), entprop::SeparationError);
}

TEST_CASE("rank-deficient design is rejected") {
  Eigen::VectorXd y(6);
  y << 0, 1, 0, 1, 1, 0;
  Eigen::MatrixXd design(6, 3);
  design.col(0).setOnes();
  design.col(1) << 1, 2, 3, 4, 5, 6;
  design.col(2) = 2.0 * design.col(1);
  CHECK_THROWS_AS(fit_logistic(y, design), entprop::RankError);
}

TEST_CASE("poisson fit on the five-unit example data") {
  Eigen::VectorXd z(5), x(5);
  z << 1, 2, 1, 2, 4;
  x << -5, -1, 0, 3, 10;
  const GlmFit fit = fit_poisson(z, with_intercept(x));
  CHECK(fit.converged);
  // Frozen from an independent Newton solve of the score equations.
  CHECK(fit.coefficients[0] == doctest::Approx(0.453764474065).epsilon(1e-8));
  CHECK(fit.coefficients[1] == doctest::Approx(0.091268216693).epsilon(1e-8));
  // Maximum-likelihood certificate: the score equations hold at the fit.
  Eigen::VectorXd mu(5);
  for (int i = 0; i < 5; ++i) {
    mu[i] = std::exp(fit.coefficients[0] + fit.coefficients[1] * x[i]);
  }
  CHECK(score_sup_norm(z, with_intercept(x), mu) < 1e-8);
}

TEST_CASE("poisson rejects all-zero counts as degenerate") {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd x(8);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  CHECK_THROWS_AS(fit_poisson(z, with_intercept(x)), entprop::DegenerateDataError);
}

TEST_CASE("poisson parameter recovery on self-simulated data") {
  entprop::Rng rng(733);
  const int n = 10000;
  Eigen::VectorXd z(n), x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    const double rate = std::exp(0.5 + 0.1 * x[i]);
    // inverse-cdf style draw by accumulating pmf
    const double u = rng.next_double();
    double cumulative = std::exp(-rate), pmf = std::exp(-rate);
    int count = 0;
    while (u > cumulative && count < 60) {
      ++count;
      pmf *= rate / count;
      cumulative += pmf;
    }
    z[i] = count;
  }
  const GlmFit fit = fit_poisson(z, with_intercept(x));
  CHECK(fit.converged);
  CHECK(std::abs(fit.coefficients[0] - 0.5) < 0.05);
  CHECK(std::abs(fit.coefficients[1] - 0.1) < 0.05);
}

TEST_CASE("deviance history is non-increasing") {
  entprop::Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 200;
    Eigen::VectorXd yb(n), yp(n), x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      yb[i] = rng.bernoulli(expit(0.3 - 0.8 * x[i])) ? 1.0 : 0.0;
      yp[i] = static_cast<double>(rng.uniform_int(5));
    }
    for (const GlmFit& fit :
         {fit_logistic(yb, with_intercept(x)), fit_poisson(yp, with_intercept(x))}) {
      for (std::size_t t = 1; t < fit.deviance_history.size(); ++t) {
        CHECK(fit.deviance_history[t] <= fit.deviance_history[t - 1] + 1e-9);
      }
    }
  }
}

TEST_CASE("score equations hold at convergence") {
  entprop::Rng rng(42);
  const int n = 500;
  Eigen::VectorXd y(n), x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.bernoulli(expit(-0.5 + x[i])) ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd design = with_intercept(x);
  const GlmFit fit = fit_logistic(y, design);
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) {
    mu[i] = expit(fit.coefficients[0] + fit.coefficients[1] * x[i]);
  }
  CHECK(score_sup_norm(y, design, mu) < 1e-6);
}

}  // TEST_SUITE
