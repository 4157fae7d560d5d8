#include <doctest.h>

#include <cmath>
#include <unordered_map>

#include "entprop/errors.hpp"
#include "entprop/glm.hpp"
#include "entprop/quadrature.hpp"
#include "entprop/rng.hpp"
#include "entprop/similarity.hpp"
#include "oracles.hpp"

using namespace entprop;

namespace {

Subclassification random_labels(int n, int k, Rng& rng) {
  Subclassification sub;
  sub.num_classes = k;
  for (int i = 0; i < n; ++i) sub.labels.push_back(rng.uniform_int(k));
  return sub;
}

Eigen::MatrixXd gaussian_points(int m, int dim, Rng& rng, double sd = 1.0) {
  Eigen::MatrixXd points(m, dim);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < dim; ++j) points(i, j) = rng.normal(0.0, sd);
  return points;
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("identical and label-permuted subclassifications score one") {
  Rng rng(1);
  const Subclassification sub = random_labels(120, 5, rng);
  CHECK(exact_similarity(sub, sub) == doctest::Approx(1.0));

  Subclassification permuted = sub;
  for (auto& label : permuted.labels) label = (label + 2) % 5;
  CHECK(exact_similarity(sub, permuted) == doctest::Approx(1.0));
}

TEST_CASE("assignment solution equals permutation enumeration") {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + rng.uniform_int(6);
    const Subclassification a = random_labels(40 + rng.uniform_int(60), k, rng);
    Subclassification b = random_labels(static_cast<int>(a.labels.size()), k, rng);
    CHECK(exact_similarity(a, b) ==
          doctest::Approx(oracles::similarity_by_enumeration(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("similarity is symmetric and floored at 1/K for balanced labels") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + rng.uniform_int(5);
    const int per_class = 10;
    Subclassification a, b;
    a.num_classes = b.num_classes = k;
    for (int i = 0; i < k * per_class; ++i) {
      a.labels.push_back(i / per_class);  // balanced
      b.labels.push_back(rng.uniform_int(k));
    }
    const double ab = exact_similarity(a, b);
    CHECK(ab == doctest::Approx(exact_similarity(b, a)).epsilon(1e-12));
    CHECK(ab >= 1.0 / k - 1e-12);
    CHECK(ab <= 1.0 + 1e-12);
  }
}

TEST_CASE("unequal class counts are padded") {
  Subclassification coarse, fine;
  coarse.num_classes = 2;
  coarse.labels = {0, 0, 1, 1};
  fine.num_classes = 4;
  fine.labels = {0, 1, 2, 3};
  CHECK(exact_similarity(coarse, fine) == doctest::Approx(0.5));
  Rng rng(1);
  CHECK_THROWS_AS(exact_similarity(coarse, random_labels(5, 2, rng)),
                  std::invalid_argument);
}

TEST_CASE("identical fields have similarity one, negated-scaled too") {
  Rng rng(4);
  const Eigen::MatrixXd points = gaussian_points(500, 3, rng);
  const GradientFn grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g(3);
    g << std::sin(x[0]) + 1.2, x[1] * x[1] + 0.5, std::exp(-x[2] * x[2]);
    return g;
  };
  const GradientFn neg_scaled = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -2.0 * grad(x);
  };
  const GradientField field = evaluate_field(grad, points);
  CHECK(approx_similarity(field, field) == doctest::Approx(1.0));
  CHECK(approx_similarity(field, evaluate_field(neg_scaled, points)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal constant fields have similarity zero") {
  Rng rng(5);
  const Eigen::MatrixXd points = gaussian_points(100, 2, rng);
  const GradientFn ex = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd{{1.0, 0.0}};
  };
  const GradientFn ey = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd{{0.0, 1.0}};
  };
  CHECK(approx_similarity(evaluate_field(ex, points), evaluate_field(ey, points)) ==
        doctest::Approx(0.0));
}

TEST_CASE("zero-gradient handling") {
  Rng rng(6);
  const Eigen::MatrixXd points = gaussian_points(50, 2, rng);
  const ModelFn flat = [](const Eigen::VectorXd&) { return 0.25; };
  const GradientField flat_field = evaluate_field(flat, points);
  CHECK(flat_field.excluded_count() == 50);
  CHECK_THROWS_AS(approx_similarity(flat_field, flat_field), UndefinedSimilarityError);

  const GradientField other =
      evaluate_field(GradientFn([](const Eigen::VectorXd& x) { return x; }), points);
  CHECK_THROWS_AS(approx_similarity(flat_field, other), UndefinedSimilarityError);

  CHECK_THROWS_AS(
      approx_similarity(other, evaluate_field(flat, gaussian_points(50, 2, rng))),
      std::invalid_argument);  // different sample points
}

TEST_CASE("finite differences agree with analytic gradients") {
  // product-form no-new-edge probability over a row of dyad covariates
  const double a = -1.0, b = 0.7;
  const int dim = 6;
  const ModelFn value = [=](const Eigen::VectorXd& x) {
    double none = 1.0;
    for (int j = 0; j < dim; ++j) none *= 1.0 - expit(a + b * x[j]);
    return 1.0 - none;
  };
  const GradientFn grad = [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    double none = 1.0;
    for (int j = 0; j < dim; ++j) none *= 1.0 - expit(a + b * x[j]);
    Eigen::VectorXd g(dim);
    for (int j = 0; j < dim; ++j) g[j] = none * b * expit(a + b * x[j]);
    return g;
  };
  Rng rng(7);
  const Eigen::MatrixXd points = gaussian_points(200, dim, rng);
  const GradientField numeric = evaluate_field(value, points);
  const GradientField analytic = evaluate_field(grad, points);
  CHECK((numeric.gradients - analytic.gradients).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(numeric.method == GradientField::Method::CentralDifference);
  CHECK(analytic.method == GradientField::Method::Analytic);
}

TEST_CASE("linear models give their direction exactly") {
  Eigen::VectorXd beta(3);
  beta << 2.0, -1.0, 0.5;
  const GradientFn grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double mu = expit(beta.dot(x));
    return mu * (1.0 - mu) * beta;
  };
  Rng rng(8);
  const CovariateSampler sampler = [](Rng& r) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = r.normal();
    return x;
  };
  const Eigen::VectorXd nbar = expected_normalized_gradient(grad, sampler, 200, rng);
  CHECK((nbar - beta / beta.norm()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spherical models have vanishing expected normalized gradient") {
  const GradientFn grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double norm = x.norm();
    if (norm == 0.0) return Eigen::VectorXd::Zero(x.size());
    // radial direction with a norm-dependent magnitude
    return std::exp(-norm) * x / norm;
  };
  Rng rng(9);
  const CovariateSampler sampler = [](Rng& r) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = r.normal();
    return x;
  };
  const Eigen::VectorXd nbar = expected_normalized_gradient(grad, sampler, 100000, rng);
  CHECK(nbar.norm() <= 0.02);
}

TEST_CASE("projection form agrees with the sampled cosine for linear models") {
  Rng rng(10);
  const int m = 20000;
  const double tolerance = 2.0 / std::sqrt(static_cast<double>(m));
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd beta(3);
    for (int j = 0; j < 3; ++j) beta[j] = rng.normal();
    if (beta.norm() < 0.1) continue;
    // a smooth non-linear reference model
    const double w0 = rng.normal(), w1 = rng.normal(), w2 = rng.normal();
    const GradientFn e_grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd g(3);
      g << w0 + std::sin(x[0]), w1 + 0.5 * std::cos(x[1]), w2 + 0.2 * x[2];
      return g;
    };
    const GradientFn m_grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double mu = expit(beta.dot(x));
      return mu * (1.0 - mu) * beta;
    };
    const Eigen::MatrixXd shared = gaussian_points(m, 3, rng);
    const double direct = approx_similarity(evaluate_field(m_grad, shared),
                                            evaluate_field(e_grad, shared));
    // independent covariate draws for the expected normalized gradient
    const CovariateSampler sampler = [](Rng& r) {
      Eigen::VectorXd x(3);
      for (int j = 0; j < 3; ++j) x[j] = r.normal();
      return x;
    };
    const Eigen::VectorXd nbar = expected_normalized_gradient(e_grad, sampler, m, rng);
    CHECK(std::abs(linear_projection_similarity(beta, nbar) - direct) <= tolerance);
  }
}

TEST_CASE("projection closed cases") {
  Eigen::VectorXd beta(2), nbar(2);
  beta << 3.0, 0.0;
  nbar << 0.8, 0.0;
  CHECK(linear_projection_similarity(beta, nbar) == doctest::Approx(0.8));
  nbar << 0.0, 0.7;
  CHECK(linear_projection_similarity(beta, nbar) == doctest::Approx(0.0));
  CHECK_THROWS_AS(linear_projection_similarity(Eigen::VectorXd::Zero(2), nbar),
                  std::invalid_argument);
}

TEST_CASE("monotone transforms leave the cosine similarity unchanged") {
  Rng rng(11);
  const Eigen::MatrixXd points = gaussian_points(300, 3, rng);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(3), v(3);
    for (int j = 0; j < 3; ++j) {
      w[j] = rng.normal();
      v[j] = rng.normal();
    }
    const ModelFn m_value = [&](const Eigen::VectorXd& x) {
      return expit(w.dot(x) + 0.3 * x[0] * x[1]);
    };
    const GradientFn m_grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double inner = w.dot(x) + 0.3 * x[0] * x[1];
      const double mu = expit(inner);
      Eigen::VectorXd g = w;
      g[0] += 0.3 * x[1];
      g[1] += 0.3 * x[0];
      return mu * (1.0 - mu) * g;
    };
    // increasing transform h(t) = exp(2t), decreasing transform h(t) = -3t
    const GradientFn increasing = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return 2.0 * std::exp(2.0 * m_value(x)) * m_grad(x);
    };
    const GradientFn decreasing = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return -3.0 * m_grad(x);
    };
    const GradientFn e_grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return v + x * 0.1;
    };
    const GradientField fe = evaluate_field(e_grad, points);
    const double base = approx_similarity(evaluate_field(m_grad, points), fe);
    CHECK(approx_similarity(evaluate_field(increasing, points), fe) ==
          doctest::Approx(base).epsilon(1e-12));
    CHECK(approx_similarity(evaluate_field(decreasing, points), fe) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("dyadic similarity closed and comparative cases") {
  Rng rng(12);
  const auto standard_normal = [](Rng& r) { return r.normal(); };

  // constant expit vector: exactly one
  CHECK(dyadic_similarity(Eigen::VectorXd::Constant(20, -2.0), 0.0, standard_normal,
                          50, rng) == doctest::Approx(1.0));

  // homogeneous effects with covariate noise average out
  Rng homo_rng(13);
  const double homogeneous = dyadic_similarity(
      Eigen::VectorXd::Constant(50, -5.0), 1.0, standard_normal, 2000, homo_rng);
  CHECK(homogeneous >= 0.995);

  // heterogeneous effects depress the agreement
  Rng hetero_rng(13);
  Eigen::VectorXd spread(50);
  for (int i = 0; i < 50; ++i) spread[i] = -5.0 + 2.0 * hetero_rng.normal();
  Rng eval_rng(14);
  const double heterogeneous =
      dyadic_similarity(spread, 1.0, standard_normal, 2000, eval_rng);
  CHECK(heterogeneous < homogeneous);
}

TEST_CASE("moment residual vanishes for the plug-in model") {
  Rng rng(15);
  Eigen::VectorXd beta(2);
  beta << 0.4, -0.9;
  const Eigen::MatrixXd sample = gaussian_points(500, 2, rng);
  const auto h = [](double t) { return expit(t); };
  const auto h_prime = [](double t) {
    const double mu = expit(t);
    return mu * (1.0 - mu);
  };
  const ModelFn plug_in = [&](const Eigen::VectorXd& x) { return expit(beta.dot(x)); };
  const Eigen::VectorXd residual = moment_residual(beta, plug_in, sample, h, h_prime);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("moment residual is the logistic score at the MLE") {
  Rng rng(16);
  const int n = 400;
  Eigen::MatrixXd sample(n, 2);
  Eigen::VectorXd responses(n);
  for (int i = 0; i < n; ++i) {
    sample(i, 0) = 1.0;
    sample(i, 1) = rng.normal();
    responses[i] = rng.bernoulli(expit(0.3 + 0.8 * sample(i, 1))) ? 1.0 : 0.0;
  }
  const GlmFit fit = fit_logistic(responses, sample);

  // empirical response probabilities: each row is its own covariate cell,
  // looked up by its (unique) non-intercept coordinate
  std::unordered_map<double, double> cell_response;
  for (int i = 0; i < n; ++i) cell_response[sample(i, 1)] = responses[i];
  const ModelFn empirical = [&](const Eigen::VectorXd& x) {
    return cell_response.at(x[1]);
  };
  const auto h = [](double t) { return expit(t); };
  const auto h_prime = [](double t) {
    const double mu = expit(t);
    return mu * (1.0 - mu);
  };
  const Eigen::VectorXd at_mle =
      moment_residual(fit.coefficients, empirical, sample, h, h_prime);
  CHECK(at_mle.cwiseAbs().maxCoeff() < 1e-8);

  // perturbing the coefficients moves the residual away from zero
  Eigen::VectorXd nudged = fit.coefficients;
  nudged[1] += 0.05;
  const double near = moment_residual(nudged, empirical, sample, h, h_prime).norm();
  nudged[1] += 0.2;
  const double far = moment_residual(nudged, empirical, sample, h, h_prime).norm();
  CHECK(near > 1e-4);
  CHECK(far > near);
}

TEST_CASE("moment residual guards the link boundary") {
  Eigen::VectorXd beta(1);
  beta << 100.0;
  Eigen::MatrixXd sample(1, 1);
  sample << 1.0;
  const auto h = [](double t) { return expit(t); };
  const auto h_prime = [](double t) {
    const double mu = expit(t);
    return mu * (1.0 - mu);
  };
  CHECK_THROWS_AS(
      moment_residual(beta, [](const Eigen::VectorXd&) { return 0.5; }, sample, h, h_prime),
      NumericalBoundaryError);
}

TEST_CASE("r function closed cases") {
  CHECK(r_function(1.3, 0.0) == doctest::Approx(expit(1.3)).epsilon(1e-15));
  CHECK(r_function(-0.4, 0.0) == doctest::Approx(expit(-0.4)).epsilon(1e-15));
  for (double sigma : {0.2, 1.0, 2.5}) {
    CHECK(r_function(0.0, sigma) == doctest::Approx(0.5).epsilon(1e-13));
  }
  CHECK_THROWS_AS(r_function(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("r function matches a frozen-seed Monte-Carlo oracle") {
  Rng rng(196883);
  const int n = 10000000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += expit(1.0 + 2.0 * rng.normal());
  CHECK(std::abs(r_function(1.0, 2.0) - acc / n) < 1e-4);
}

TEST_CASE("smoothing direction is opposite to the intercept sign") {
  CHECK(r_monotonicity_sign(-1.0, 1.0) == 1);
  CHECK(r_monotonicity_sign(1.0, 1.0) == -1);
  for (double sigma = 0.1; sigma <= 3.0; sigma += 0.2) {
    CHECK(r_monotonicity_sign(2.0, sigma) == -1);
  }
}

}  // TEST_SUITE
