#include "entprop/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace entprop {

AssignmentResult solve_max_assignment(const Eigen::MatrixXd& score) {
  if (score.rows() != score.cols() || score.rows() == 0) {
    throw std::invalid_argument("solve_max_assignment: matrix must be square and non-empty");
  }
  const int n = static_cast<int>(score.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Minimize the negated score. 1-based arrays with column 0 as the virtual
  // start of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[col] = row occupying col
  std::vector<int> way(n + 1, 0);

  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int row0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = -score(row0 - 1, col - 1) - u[row0] - v[col];
        if (cur < min_slack[col]) {
          min_slack[col] = cur;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  AssignmentResult result;
  result.assignment.assign(n, -1);
  for (int col = 1; col <= n; ++col) {
    result.assignment[match[col] - 1] = col - 1;
  }
  for (int row = 0; row < n; ++row) {
    result.total += score(row, result.assignment[row]);
  }
  return result;
}

}  // namespace entprop
