#include "entprop/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "entprop/errors.hpp"
#include "entprop/glm.hpp"

namespace entprop {
namespace {

void check_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": dyadic matrix must be square");
  }
}

}  // namespace

int model_size(const NetworkModel& model) {
  return std::visit(
      [](const auto& spec) -> int {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, InnerProductSpec>) {
          return static_cast<int>(spec.covariates.rows());
        } else if constexpr (std::is_same_v<T, DyadicLogisticSpec>) {
          return static_cast<int>(spec.node_effects.size());
        } else if constexpr (std::is_same_v<T, ProductExpSpec>) {
          return static_cast<int>(spec.covariates.size());
        } else if constexpr (std::is_same_v<T, NodeEffectFitSpec>) {
          return static_cast<int>(spec.node_effects.size());
        } else {
          return static_cast<int>(spec.probs.rows());
        }
      },
      model);
}

bool model_directed(const NetworkModel& model) {
  return std::visit(
      [](const auto& spec) -> bool {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, DyadicLogisticSpec> ||
                      std::is_same_v<T, NodeEffectFitSpec> ||
                      std::is_same_v<T, EdgeProbMatrixSpec>) {
          return spec.directed;
        } else {
          return false;
        }
      },
      model);
}

double edge_prob(const NetworkModel& model, int i, int j) {
  const int n = model_size(model);
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::invalid_argument("edge_prob: unit index out of range");
  }
  if (i == j) {
    throw std::invalid_argument("edge_prob: no self-dyads");
  }
  return std::visit(
      [i, j](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, InnerProductSpec>) {
          const double ip = spec.covariates.row(i).dot(spec.covariates.row(j));
          return expit(spec.a + spec.b * ip);
        } else if constexpr (std::is_same_v<T, DyadicLogisticSpec>) {
          return expit(0.5 * spec.node_effects[i] + 0.5 * spec.node_effects[j] +
                       spec.b * spec.dyadic_covariates(i, j));
        } else if constexpr (std::is_same_v<T, ProductExpSpec>) {
          return expit(spec.covariates[i] * spec.covariates[j] + spec.intercept);
        } else if constexpr (std::is_same_v<T, NodeEffectFitSpec>) {
          const double node_term =
              spec.directed ? spec.node_effects[i]
                            : 0.5 * (spec.node_effects[i] + spec.node_effects[j]);
          return expit(spec.intercept + node_term +
                       spec.slope * spec.dyadic_covariates(i, j));
        } else {
          return spec.probs(i, j);
        }
      },
      model);
}

Graph sample_posttreatment(const NetworkModel& model, const Graph& g_minus, Rng& rng) {
  const int n = g_minus.size();
  if (model_size(model) != n) {
    throw std::invalid_argument("sample_posttreatment: model size does not match graph");
  }
  const bool directed = model_directed(model);
  if (directed != g_minus.directed()) {
    throw std::invalid_argument("sample_posttreatment: directedness mismatch");
  }
  Graph g_plus = g_minus;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || g_minus.has_edge(i, j)) continue;
      if (rng.bernoulli(edge_prob(model, i, j))) {
        g_plus.add_edge(i, j);
      }
    }
  }
  return g_plus;
}

double log_likelihood(const NetworkModel& model, const Graph& g_plus,
                      const Graph& g_minus) {
  const int n = g_minus.size();
  if (model_size(model) != n || g_plus.size() != n) {
    throw std::invalid_argument("log_likelihood: size mismatch");
  }
  if (!g_plus.is_supergraph_of(g_minus)) {
    throw SupergraphViolation("log_likelihood: post-treatment graph dropped an edge");
  }
  const bool directed = g_minus.directed();
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || g_minus.has_edge(i, j)) continue;
      const double p = edge_prob(model, i, j);
      ll += g_plus.has_edge(i, j) ? std::log(p) : std::log1p(-p);
    }
  }
  return ll;
}

namespace {

struct NodeEffectObjective {
  const Graph& g;
  const Eigen::MatrixXd& x;
  bool directed;
  double lambda;

  int n() const { return g.size(); }

  double linear_predictor(double c, const Eigen::VectorXd& u, double d, int i,
                          int j) const {
    const double node_term = directed ? u[i] : 0.5 * (u[i] + u[j]);
    return c + node_term + d * x(i, j);
  }

  // Penalized Bernoulli log-likelihood over all dyads.
  double value(double c, const Eigen::VectorXd& u, double d) const {
    double ll = 0.0;
    for (int i = 0; i < n(); ++i) {
      for (int j = directed ? 0 : i + 1; j < n(); ++j) {
        if (i == j) continue;
        const double eta = linear_predictor(c, u, d, i, j);
        // log expit(eta) if edge, log expit(-eta) otherwise
        const double sign = g.has_edge(i, j) ? 1.0 : -1.0;
        const double s = sign * eta;
        ll += s < 0 ? s - std::log1p(std::exp(s)) : -std::log1p(std::exp(-s));
      }
    }
    return ll - lambda * u.squaredNorm();
  }

  // Gradient and Hessian in the parameter order (c, d, u_0..u_{n-1}).
  void derivatives(double c, const Eigen::VectorXd& u, double d,
                   Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const int p = n() + 2;
    grad.setZero(p);
    hess.setZero(p, p);
    for (int i = 0; i < n(); ++i) {
      for (int j = directed ? 0 : i + 1; j < n(); ++j) {
        if (i == j) continue;
        const double eta = linear_predictor(c, u, d, i, j);
        const double mu = expit(eta);
        const double resid = (g.has_edge(i, j) ? 1.0 : 0.0) - mu;
        const double w = mu * (1.0 - mu);
        const double xij = x(i, j);
        // Coefficient of each parameter in the linear predictor.
        const double ui_coef = directed ? 1.0 : 0.5;
        grad[0] += resid;
        grad[1] += resid * xij;
        grad[2 + i] += resid * ui_coef;
        if (!directed) grad[2 + j] += resid * 0.5;

        hess(0, 0) += w;
        hess(0, 1) += w * xij;
        hess(1, 1) += w * xij * xij;
        hess(0, 2 + i) += w * ui_coef;
        hess(1, 2 + i) += w * xij * ui_coef;
        hess(2 + i, 2 + i) += w * ui_coef * ui_coef;
        if (!directed) {
          hess(0, 2 + j) += w * 0.5;
          hess(1, 2 + j) += w * 0.5 * xij;
          hess(2 + j, 2 + j) += w * 0.25;
          hess(2 + i, 2 + j) += w * 0.25;
        }
      }
    }
    for (int i = 0; i < n(); ++i) {
      grad[2 + i] -= 2.0 * lambda * u[i];
      hess(2 + i, 2 + i) += 2.0 * lambda;
    }
    hess = hess.selfadjointView<Eigen::Upper>();
  }
};

}  // namespace

NodeEffectFitSpec fit_node_effect_model(const Graph& g_plus,
                                        const Eigen::MatrixXd& dyadic_covariates,
                                        bool directed, double ridge_lambda) {
  const int n = g_plus.size();
  check_square(dyadic_covariates, "fit_node_effect_model");
  if (dyadic_covariates.rows() != n) {
    throw std::invalid_argument("fit_node_effect_model: covariate size mismatch");
  }
  if (n < 3) {
    throw std::invalid_argument("fit_node_effect_model: need at least 3 units");
  }
  if (ridge_lambda < 0.0) {
    throw std::invalid_argument("fit_node_effect_model: ridge_lambda must be nonnegative");
  }
  // The graph's directedness is not required to match: a directed model fit
  // to an undirected network reads each dyad twice, once per direction.

  constexpr double kGradTol = 1e-8;
  constexpr int kMaxIter = 200;

  const NodeEffectObjective objective{g_plus, dyadic_covariates, directed,
                                      ridge_lambda};

  // Start from the density logit with flat node effects; count dyads the way
  // the model walks them so the density matches the fitted likelihood.
  double dyads = 0.0, observed = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      dyads += 1.0;
      observed += g_plus.has_edge(i, j) ? 1.0 : 0.0;
    }
  }
  const double density = std::clamp(observed / dyads, 1e-4, 1.0 - 1e-4);
  double c = std::log(density / (1.0 - density));
  double d = 0.0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  NodeEffectFitSpec fit;
  fit.dyadic_covariates = dyadic_covariates;
  fit.directed = directed;
  fit.ridge_lambda = ridge_lambda;

  double value = objective.value(c, u, d);
  fit.objective_history.push_back(value);

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    objective.derivatives(c, u, d, grad, hess);
    fit.gradient_norm = grad.cwiseAbs().maxCoeff();
    fit.iterations = iter - 1;
    if (fit.gradient_norm < kGradTol) {
      fit.converged = true;
      break;
    }

    hess.diagonal().array() += 1e-10;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      step = grad;  // gradient ascent fallback
    }

    // Close to the optimum the objective differences fall below the
    // double-precision noise of evaluating it, so the halving test cannot
    // certify improvement; raw Newton steps converge there anyway.
    const bool quadratic_zone = fit.gradient_norm < 1e-4;
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30 && !accepted; ++halving) {
      const double new_c = c + scale * step[0];
      const double new_d = d + scale * step[1];
      const Eigen::VectorXd new_u = u + scale * step.segment(2, n);
      const double new_value = objective.value(new_c, new_u, new_d);
      if (quadratic_zone || new_value >= value - 1e-12) {
        c = new_c;
        d = new_d;
        u = new_u;
        value = quadratic_zone ? new_value : std::max(new_value, value);
        accepted = true;
      }
      scale *= 0.5;
    }
    fit.objective_history.push_back(value);
    if (!accepted) break;  // stalled; the convergence check below decides
  }

  fit.intercept = c;
  fit.slope = d;
  fit.node_effects = u;

  if (!fit.converged) {
    Eigen::VectorXd last(n + 2);
    last[0] = c;
    last[1] = d;
    last.segment(2, n) = u;
    throw FitError("fit_node_effect_model: gradient tolerance not reached", last);
  }
  return fit;
}

}  // namespace entprop
