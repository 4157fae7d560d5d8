// Edge-probability models for the evolution from a baseline network to a
// post-treatment network: sampling conditional on the baseline (existing
// edges persist, only non-edges are drawn), Bernoulli likelihood over the
// free dyads, and penalized maximum-likelihood fitting of the node-effect
// model. Specs are immutable once constructed or fitted.
#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "entprop/graph.hpp"
#include "entprop/rng.hpp"

namespace entprop {

// P(edge ij) = expit(a + b x_i' x_j), covariates N x d, rows are units.
// tau is the covariate scale used when generating covariates.
struct InnerProductSpec {
  double a = 0.0;
  double b = 1.0;
  Eigen::MatrixXd covariates;
  double tau = 1.0;
};

// P(edge ij) = expit(a_i/2 + a_j/2 + b x_ij) with a dyadic covariate matrix.
struct DyadicLogisticSpec {
  Eigen::VectorXd node_effects;
  double b = 1.0;
  Eigen::MatrixXd dyadic_covariates;
  bool directed = false;
};

// P(edge ij) = expit(x_i x_j + intercept) with scalar unit covariates.
struct ProductExpSpec {
  Eigen::VectorXd covariates;
  double intercept = 1.0;
};

// Fitted sender-effect model: P(edge ij) = expit(c + u_i + d x_ij) when
// directed, expit(c + (u_i+u_j)/2 + d x_ij) when undirected. Produced by
// fit_node_effect_model.
struct NodeEffectFitSpec {
  double intercept = 0.0;
  Eigen::VectorXd node_effects;
  double slope = 0.0;
  Eigen::MatrixXd dyadic_covariates;
  bool directed = true;
  double ridge_lambda = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> objective_history;
};

// Precomputed dyad probabilities; the catch-all for derived models such as
// covariate-marginalized edge probabilities.
struct EdgeProbMatrixSpec {
  Eigen::MatrixXd probs;
  bool directed = false;
};

using NetworkModel = std::variant<InnerProductSpec, DyadicLogisticSpec,
                                  ProductExpSpec, NodeEffectFitSpec,
                                  EdgeProbMatrixSpec>;

int model_size(const NetworkModel& model);
bool model_directed(const NetworkModel& model);

// Probability of dyad (i, j); throws for i == j or out-of-range indices.
double edge_prob(const NetworkModel& model, int i, int j);

// Draws a post-treatment graph: every baseline edge persists, every free
// dyad becomes an edge independently with its model probability. Undirected
// models sample each unordered dyad once.
Graph sample_posttreatment(const NetworkModel& model, const Graph& g_minus, Rng& rng);

// Bernoulli log-likelihood of g_plus over the free dyads of g_minus.
double log_likelihood(const NetworkModel& model, const Graph& g_plus,
                      const Graph& g_minus);

// Maximizes sum of edge log-likelihoods minus ridge_lambda * ||u||^2 by
// damped Newton iterations (gradient sup-norm < 1e-8, at most 200 steps).
// Throws FitError carrying the last iterate (c, d, u...) on non-convergence.
NodeEffectFitSpec fit_node_effect_model(const Graph& g_plus,
                                        const Eigen::MatrixXd& dyadic_covariates,
                                        bool directed, double ridge_lambda);

}  // namespace entprop
