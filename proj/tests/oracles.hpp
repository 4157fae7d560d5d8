// Test-side oracles, kept independent of the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "entprop/graph.hpp"
#include "entprop/rng.hpp"
#include "entprop/subclass.hpp"

namespace oracles {

// Permutation-enumeration maximum of the matched-class count, feasible for
// K <= 7.
inline double similarity_by_enumeration(const entprop::Subclassification& sub_m,
                                        const entprop::Subclassification& sub_e) {
  const int k = std::max(sub_m.num_classes, sub_e.num_classes);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < sub_m.labels.size(); ++i) {
    counts(sub_m.labels[i], sub_e.labels[i]) += 1.0;
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (int row = 0; row < k; ++row) total += counts(row, perm[row]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(sub_m.labels.size());
}

// Random graph pair with g_plus a supergraph of g_minus.
struct GraphPair {
  entprop::Graph g_minus;
  entprop::Graph g_plus;
};

inline GraphPair random_supergraph_pair(int n, bool directed, double p_minus,
                                        double p_new, entprop::Rng& rng) {
  entprop::Graph g_minus(n, directed);
  entprop::Graph g_plus(n, directed);
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(p_minus)) {
        g_minus.add_edge(i, j);
        g_plus.add_edge(i, j);
      } else if (rng.bernoulli(p_new)) {
        g_plus.add_edge(i, j);
      }
    }
  }
  return {std::move(g_minus), std::move(g_plus)};
}

}  // namespace oracles
