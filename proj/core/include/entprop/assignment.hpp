// Linear assignment solver (shortest augmenting path with dual potentials,
// O(n^3)). Maximizes the total score of a row-to-column permutation.
#pragma once

#include <vector>

#include <Eigen/Core>

namespace entprop {

struct AssignmentResult {
  std::vector<int> assignment;  // assignment[row] = column
  double total = 0.0;
};

AssignmentResult solve_max_assignment(const Eigen::MatrixXd& score);

}  // namespace entprop
