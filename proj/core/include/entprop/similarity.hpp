// Agreement between propensity-score models: exact subclassification
// similarity (permutation-maximized class overlap, solved as a linear
// assignment problem), the gradient-cosine approximation, its projection
// form for linear models, the binary-treatment moment equation, and the
// normal-smoothed logistic curve r(a, sigma) with its monotonicity check.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "entprop/rng.hpp"
#include "entprop/subclass.hpp"

namespace entprop {

// counts(k, l) = number of units placed in class k by one model and class l
// by the other; padded with zero rows/columns to square when the class
// counts differ.
struct ConfusionMatrix {
  Eigen::MatrixXi counts;
};

ConfusionMatrix confusion_matrix(const Subclassification& sub_m,
                                 const Subclassification& sub_e);

// Permutation-maximized fraction of units the two subclassifications place
// in the same class; in [0, 1], symmetric in its arguments.
double exact_similarity(const Subclassification& sub_m, const Subclassification& sub_e);

using ModelFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
// Draws one covariate vector.
using CovariateSampler = std::function<Eigen::VectorXd(Rng&)>;

struct GradientField {
  enum class Method { Analytic, CentralDifference };

  Eigen::MatrixXd sample_points;          // M x d
  Eigen::MatrixXd gradients;              // M x d
  std::vector<std::uint8_t> zero_gradient;  // flagged rows are excluded
  Method method = Method::Analytic;

  int excluded_count() const;
};

// Central differences with step 1e-5 * (1 + ||x||) per point.
GradientField evaluate_field(const ModelFn& model, const Eigen::MatrixXd& points);
GradientField evaluate_field(const GradientFn& gradient, const Eigen::MatrixXd& points);

// |mean cosine between the two gradients| over points where neither gradient
// vanishes. Fields must share their sample points. Throws
// UndefinedSimilarityError when no point survives.
double approx_similarity(const GradientField& field_m, const GradientField& field_e);

// |beta' nbar| / ||beta||; the linear-model closed form.
double linear_projection_similarity(const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& nabla_e_bar);

// Mean of grad g(X)/||grad g(X)|| over M covariate draws.
Eigen::VectorXd mean_normalized_gradient(const GradientField& field);
Eigen::VectorXd expected_normalized_gradient(const ModelFn& model,
                                             const CovariateSampler& sampler, int draws,
                                             GradientField::Method method, Rng& rng);
Eigen::VectorXd expected_normalized_gradient(const GradientFn& gradient,
                                             const CovariateSampler& sampler, int draws,
                                             Rng& rng);

// Dyadic-model agreement with a row-mean linear model: for each unit i the
// per-dyad expit values expit(a_i/2 + a_j/2 + b x) are averaged over `draws`
// covariate samples, and the cosine of that mean vector with the all-ones
// vector is taken; returns |average over units|. Equals 1 exactly when the
// averaged vector is constant.
double dyadic_similarity(const Eigen::VectorXd& node_effects, double b,
                         const std::function<double(Rng&)>& covariate_sampler,
                         int draws, Rng& rng);

// Empirical moment-equation residual
//   E[(e(X)/h(X'b)) (h'(X'b)/(1-h(X'b))) X] - E[(h'(X'b)/(1-h(X'b))) X]
// over the rows of `sample`. Throws NumericalBoundaryError when h reaches
// {0,1} within 1e-12.
Eigen::VectorXd moment_residual(const Eigen::VectorXd& beta, const ModelFn& e_model,
                                const Eigen::MatrixXd& sample,
                                const std::function<double(double)>& h,
                                const std::function<double(double)>& h_prime);

// r(a, sigma) = E expit(a + sigma Z), Z standard normal; 64-node
// Gauss-Hermite quadrature.
double r_function(double a, double sigma);

// Sign of the central-difference derivative of r in sigma (step 1e-4).
int r_monotonicity_sign(double a, double sigma);

}  // namespace entprop
