#include "entprop/similarity.hpp"

#include <cmath>
#include <stdexcept>

#include "entprop/assignment.hpp"
#include "entprop/errors.hpp"
#include "entprop/glm.hpp"
#include "entprop/quadrature.hpp"

namespace entprop {

ConfusionMatrix confusion_matrix(const Subclassification& sub_m,
                                 const Subclassification& sub_e) {
  if (sub_m.labels.size() != sub_e.labels.size()) {
    throw std::invalid_argument("confusion_matrix: unit counts differ");
  }
  const int k = std::max(sub_m.num_classes, sub_e.num_classes);
  ConfusionMatrix cm;
  cm.counts = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < sub_m.labels.size(); ++i) {
    cm.counts(sub_m.labels[i], sub_e.labels[i]) += 1;
  }
  return cm;
}

double exact_similarity(const Subclassification& sub_m, const Subclassification& sub_e) {
  const ConfusionMatrix cm = confusion_matrix(sub_m, sub_e);
  const AssignmentResult best = solve_max_assignment(cm.counts.cast<double>());
  return best.total / static_cast<double>(sub_m.labels.size());
}

int GradientField::excluded_count() const {
  int count = 0;
  for (std::uint8_t flag : zero_gradient) count += flag;
  return count;
}

namespace {

constexpr double kZeroGradientNorm = 1e-14;

void flag_zero_rows(GradientField& field) {
  const int m = static_cast<int>(field.gradients.rows());
  field.zero_gradient.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    if (field.gradients.row(i).norm() < kZeroGradientNorm) {
      field.zero_gradient[i] = 1;
    }
  }
}

}  // namespace

GradientField evaluate_field(const ModelFn& model, const Eigen::MatrixXd& points) {
  GradientField field;
  field.sample_points = points;
  field.method = GradientField::Method::CentralDifference;
  const int m = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());
  field.gradients.resize(m, dim);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < m; ++i) {
    x = points.row(i);
    const double step = 1e-5 * (1.0 + x.norm());
    for (int j = 0; j < dim; ++j) {
      const double saved = x[j];
      x[j] = saved + step;
      const double upper = model(x);
      x[j] = saved - step;
      const double lower = model(x);
      x[j] = saved;
      field.gradients(i, j) = (upper - lower) / (2.0 * step);
    }
  }
  flag_zero_rows(field);
  return field;
}

GradientField evaluate_field(const GradientFn& gradient, const Eigen::MatrixXd& points) {
  GradientField field;
  field.sample_points = points;
  field.method = GradientField::Method::Analytic;
  const int m = static_cast<int>(points.rows());
  field.gradients.resize(m, points.cols());
  for (int i = 0; i < m; ++i) {
    field.gradients.row(i) = gradient(points.row(i).transpose());
  }
  flag_zero_rows(field);
  return field;
}

double approx_similarity(const GradientField& field_m, const GradientField& field_e) {
  if (field_m.sample_points.rows() != field_e.sample_points.rows() ||
      field_m.sample_points.cols() != field_e.sample_points.cols() ||
      (field_m.sample_points - field_e.sample_points).cwiseAbs().sum() != 0.0) {
    throw std::invalid_argument("approx_similarity: fields must share sample points");
  }
  const int m = static_cast<int>(field_m.gradients.rows());
  double acc = 0.0;
  int used = 0;
  for (int i = 0; i < m; ++i) {
    if (field_m.zero_gradient[i] || field_e.zero_gradient[i]) continue;
    const double denom = field_m.gradients.row(i).norm() * field_e.gradients.row(i).norm();
    acc += field_m.gradients.row(i).dot(field_e.gradients.row(i)) / denom;
    ++used;
  }
  if (used == 0) {
    throw UndefinedSimilarityError("approx_similarity: every sample point had a zero gradient");
  }
  return std::abs(acc / used);
}

double linear_projection_similarity(const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& nabla_e_bar) {
  if (beta.size() != nabla_e_bar.size()) {
    throw std::invalid_argument("linear_projection_similarity: dimension mismatch");
  }
  const double norm = beta.norm();
  if (norm == 0.0) {
    throw std::invalid_argument("linear_projection_similarity: beta must be nonzero");
  }
  return std::abs(beta.dot(nabla_e_bar)) / norm;
}

Eigen::VectorXd mean_normalized_gradient(const GradientField& field) {
  const int m = static_cast<int>(field.gradients.rows());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(field.gradients.cols());
  int used = 0;
  for (int i = 0; i < m; ++i) {
    if (field.zero_gradient[i]) continue;
    mean += field.gradients.row(i).transpose() / field.gradients.row(i).norm();
    ++used;
  }
  if (used == 0) {
    throw UndefinedSimilarityError("mean_normalized_gradient: all gradients vanished");
  }
  return mean / used;
}

namespace {

Eigen::MatrixXd draw_points(const CovariateSampler& sampler, int draws, Rng& rng) {
  if (draws < 1) {
    throw std::invalid_argument("expected_normalized_gradient: need at least one draw");
  }
  const Eigen::VectorXd first = sampler(rng);
  Eigen::MatrixXd points(draws, first.size());
  points.row(0) = first;
  for (int i = 1; i < draws; ++i) {
    points.row(i) = sampler(rng);
  }
  return points;
}

}  // namespace

Eigen::VectorXd expected_normalized_gradient(const ModelFn& model,
                                             const CovariateSampler& sampler, int draws,
                                             GradientField::Method method, Rng& rng) {
  const Eigen::MatrixXd points = draw_points(sampler, draws, rng);
  if (method != GradientField::Method::CentralDifference) {
    throw std::invalid_argument(
        "expected_normalized_gradient: value-only models use central differences");
  }
  return mean_normalized_gradient(evaluate_field(model, points));
}

Eigen::VectorXd expected_normalized_gradient(const GradientFn& gradient,
                                             const CovariateSampler& sampler, int draws,
                                             Rng& rng) {
  const Eigen::MatrixXd points = draw_points(sampler, draws, rng);
  return mean_normalized_gradient(evaluate_field(gradient, points));
}

double dyadic_similarity(const Eigen::VectorXd& node_effects, double b,
                         const std::function<double(Rng&)>& covariate_sampler,
                         int draws, Rng& rng) {
  if (draws < 1) {
    throw std::invalid_argument("dyadic_similarity: need at least one draw");
  }
  const int n = static_cast<int>(node_effects.size());
  if (n < 2) {
    throw std::invalid_argument("dyadic_similarity: need at least two units");
  }
  double cosine_sum = 0.0;
  Eigen::VectorXd mean_expit(n - 1);
  for (int i = 0; i < n; ++i) {
    int slot = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double base = 0.5 * (node_effects[i] + node_effects[j]);
      double acc = 0.0;
      for (int m = 0; m < draws; ++m) {
        acc += expit(base + b * covariate_sampler(rng));
      }
      mean_expit[slot++] = acc / draws;
    }
    cosine_sum += mean_expit.sum() / (std::sqrt(static_cast<double>(n - 1)) *
                                      mean_expit.norm());
  }
  return std::abs(cosine_sum / n);
}

Eigen::VectorXd moment_residual(const Eigen::VectorXd& beta, const ModelFn& e_model,
                                const Eigen::MatrixXd& sample,
                                const std::function<double(double)>& h,
                                const std::function<double(double)>& h_prime) {
  if (sample.cols() != beta.size()) {
    throw std::invalid_argument("moment_residual: sample/beta dimension mismatch");
  }
  const int m = static_cast<int>(sample.rows());
  if (m == 0) {
    throw std::invalid_argument("moment_residual: empty sample");
  }
  constexpr double kBoundary = 1e-12;
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(beta.size());
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd x = sample.row(i).transpose();
    const double link = h(x.dot(beta));
    if (link < kBoundary || link > 1.0 - kBoundary) {
      throw NumericalBoundaryError("moment_residual: link value reached {0,1}");
    }
    const double ratio = h_prime(x.dot(beta)) / (1.0 - link);
    residual += (e_model(x) / link - 1.0) * ratio * x;
  }
  return residual / m;
}

double r_function(double a, double sigma) {
  if (sigma < 0.0) {
    throw std::invalid_argument("r_function: sigma must be nonnegative");
  }
  static const GaussHermiteRule rule = gauss_hermite_rule(64);
  return normal_expectation([a, sigma](double z) { return expit(a + sigma * z); },
                            rule);
}

int r_monotonicity_sign(double a, double sigma) {
  constexpr double kStep = 1e-4;
  const double lower = r_function(a, std::max(sigma - kStep, 0.0));
  const double upper = r_function(a, sigma + kStep);
  const double diff = upper - lower;
  if (diff > 0.0) return 1;
  if (diff < 0.0) return -1;
  return 0;
}

}  // namespace entprop
