#include "entprop/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace entprop {

GaussHermiteRule gauss_hermite_rule(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_hermite_rule: need at least one node");
  }
  // Jacobi matrix of the Hermite recurrence: zero diagonal, off-diagonal
  // sqrt(k/2). Eigenvalues are the nodes; squared first eigenvector
  // components give the weights up to the total mass sqrt(pi).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  }
  GaussHermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  const double mass = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    const double first = solver.eigenvectors()(0, k);
    rule.weights[k] = mass * first * first;
  }
  return rule;
}

double normal_expectation(const std::function<double(double)>& f,
                          const GaussHermiteRule& rule) {
  const double scale = std::numbers::sqrt2;
  double acc = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k) {
    acc += rule.weights[k] * f(scale * rule.nodes[k]);
  }
  return acc / std::sqrt(std::numbers::pi);
}

}  // namespace entprop
