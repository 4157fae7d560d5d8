// Gauss-Hermite quadrature (physicists' weight exp(-x^2)), nodes and weights
// from the Golub-Welsch eigenvalue construction.
#pragma once

#include <functional>

#include <Eigen/Core>

namespace entprop {

struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite_rule(int n);

// E[f(Z)] for Z ~ N(0,1): sum_i w_i f(sqrt(2) x_i) / sqrt(pi).
double normal_expectation(const std::function<double(double)>& f,
                          const GaussHermiteRule& rule);

}  // namespace entprop
