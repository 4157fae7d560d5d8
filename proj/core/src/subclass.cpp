#include "entprop/subclass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "entprop/errors.hpp"

namespace entprop {

std::vector<int> Subclassification::class_sizes() const {
  std::vector<int> sizes(num_classes, 0);
  for (int label : labels) ++sizes[label];
  return sizes;
}

std::vector<int> Subclassification::empty_classes() const {
  const std::vector<int> sizes = class_sizes();
  std::vector<int> empty;
  for (int k = 0; k < num_classes; ++k) {
    if (sizes[k] == 0) empty.push_back(k);
  }
  return empty;
}

Subclassification quantile_subclassify(const Eigen::VectorXd& scores, int num_classes) {
  const int n = static_cast<int>(scores.size());
  if (num_classes < 1) {
    throw std::invalid_argument("quantile_subclassify: need at least one class");
  }
  if (num_classes > n) {
    throw std::invalid_argument("quantile_subclassify: more classes than units");
  }
  if (!scores.allFinite()) {
    throw std::invalid_argument("quantile_subclassify: scores must be finite");
  }

  std::vector<double> sorted(scores.data(), scores.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts(num_classes - 1);
  for (int k = 1; k < num_classes; ++k) {
    cuts[k - 1] = sorted[static_cast<std::size_t>(k) * n / num_classes];
  }

  Subclassification sub;
  sub.num_classes = num_classes;
  sub.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int label = 0;
    for (double cut : cuts) {
      if (scores[i] >= cut) ++label;
    }
    sub.labels[i] = label;
  }
  return sub;
}

namespace {

double squared_distance(const Eigen::MatrixXd& points, int row,
                        const Eigen::MatrixXd& centers, int center) {
  return (points.row(row) - centers.row(center)).squaredNorm();
}

struct KmeansRun {
  std::vector<int> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

KmeansRun lloyd_from_plusplus(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());

  // k-means++ seeding.
  Eigen::MatrixXd centers(k, dim);
  centers.row(0) = points.row(rng.uniform_int(n));
  std::vector<double> dist2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = squared_distance(points, i, centers, 0);
      for (int cc = 1; cc < c; ++cc) {
        best = std::min(best, squared_distance(points, i, centers, cc));
      }
      dist2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      centers.row(c) = points.row(rng.uniform_int(n));
      continue;
    }
    double target = rng.next_double() * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      target -= dist2[i];
      if (target <= 0.0) {
        chosen = i;
        break;
      }
    }
    centers.row(c) = points.row(chosen);
  }

  KmeansRun run;
  run.labels.assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += points.row(i);
      ++counts[run.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
      // empty clusters keep their centers
    }
  }

  run.wcss = 0.0;
  for (int i = 0; i < n; ++i) {
    run.wcss += squared_distance(points, i, centers, run.labels[i]);
  }
  return run;
}

}  // namespace

Subclassification kmeans_subclassify(const Eigen::MatrixXd& points, int num_classes,
                                     Rng& rng) {
  const int n = static_cast<int>(points.rows());
  if (num_classes < 1 || num_classes > n) {
    throw std::invalid_argument("kmeans_subclassify: class count must be in [1, n]");
  }
  constexpr int kRestarts = 20;
  const std::uint64_t master = rng.next_u64();

  KmeansRun best;
  for (int r = 0; r < kRestarts; ++r) {
    Rng restart_rng(derive_stream({master, static_cast<std::uint64_t>(r)}));
    KmeansRun run = lloyd_from_plusplus(points, num_classes, restart_rng);
    if (run.wcss < best.wcss) {
      best = std::move(run);
    }
  }

  Subclassification sub;
  sub.num_classes = num_classes;
  sub.labels = std::move(best.labels);
  return sub;
}

double within_class_effect(int k, const Subclassification& sub,
                           const Eigen::VectorXi& z, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(z.size());
  if (sub.labels.size() != static_cast<std::size_t>(n) || y.size() != n) {
    throw std::invalid_argument("within_class_effect: dimension mismatch");
  }
  if (k < 0 || k >= sub.num_classes) {
    throw std::invalid_argument("within_class_effect: class index out of range");
  }
  double treated_sum = 0.0, control_sum = 0.0;
  int treated_n = 0, control_n = 0;
  for (int i = 0; i < n; ++i) {
    if (sub.labels[i] != k) continue;
    if (z[i] == 1) {
      treated_sum += y[i];
      ++treated_n;
    } else {
      control_sum += y[i];
      ++control_n;
    }
  }
  if (treated_n == 0 || control_n == 0) {
    throw OneArmedClassError("within_class_effect: class lacks a treated or control arm");
  }
  return treated_sum / treated_n - control_sum / control_n;
}

EffectEstimate combined_effect(const Subclassification& sub, const Eigen::VectorXi& z,
                               const Eigen::VectorXd& y) {
  const int n = static_cast<int>(z.size());
  if (sub.labels.size() != static_cast<std::size_t>(n) || y.size() != n) {
    throw std::invalid_argument("combined_effect: dimension mismatch");
  }
  EffectEstimate estimate;
  estimate.class_sizes = sub.class_sizes();
  estimate.per_class.assign(sub.num_classes, std::numeric_limits<double>::quiet_NaN());

  double weighted = 0.0;
  long retained_units = 0;
  for (int k = 0; k < sub.num_classes; ++k) {
    int treated_n = 0, control_n = 0;
    double treated_sum = 0.0, control_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (sub.labels[i] != k) continue;
      if (z[i] == 1) {
        treated_sum += y[i];
        ++treated_n;
      } else {
        control_sum += y[i];
        ++control_n;
      }
    }
    if (treated_n == 0 || control_n == 0) {
      estimate.dropped_classes.push_back(k);
      continue;
    }
    const double tau_k = treated_sum / treated_n - control_sum / control_n;
    estimate.per_class[k] = tau_k;
    weighted += static_cast<double>(estimate.class_sizes[k]) * tau_k;
    retained_units += estimate.class_sizes[k];
  }
  if (retained_units == 0) {
    throw EstimationError("combined_effect: every class is one-armed");
  }
  estimate.value = weighted / static_cast<double>(retained_units);
  return estimate;
}

double level_contrast_effect(const Subclassification& sub, const Eigen::VectorXi& z,
                             const Eigen::VectorXd& y, int level) {
  const int n = static_cast<int>(z.size());
  if (sub.labels.size() != static_cast<std::size_t>(n) || y.size() != n) {
    throw std::invalid_argument("level_contrast_effect: dimension mismatch");
  }
  if (level < 1) {
    throw std::invalid_argument("level_contrast_effect: level must be at least 1");
  }
  const std::vector<int> sizes = sub.class_sizes();
  double weighted = 0.0;
  long retained_units = 0;
  for (int k = 0; k < sub.num_classes; ++k) {
    int upper_n = 0, lower_n = 0;
    double upper_sum = 0.0, lower_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (sub.labels[i] != k) continue;
      if (z[i] == level) {
        upper_sum += y[i];
        ++upper_n;
      } else if (z[i] == level - 1) {
        lower_sum += y[i];
        ++lower_n;
      }
    }
    if (upper_n == 0 || lower_n == 0) continue;
    weighted += static_cast<double>(sizes[k]) *
                (upper_sum / upper_n - lower_sum / lower_n);
    retained_units += sizes[k];
  }
  if (retained_units == 0) {
    throw EstimationError("level_contrast_effect: no class contains both levels");
  }
  return weighted / static_cast<double>(retained_units);
}

void write_subclassification_csv(const Subclassification& sub, std::ostream& out) {
  out << "unit,label\n";
  for (std::size_t i = 0; i < sub.labels.size(); ++i) {
    out << i << "," << sub.labels[i] << "\n";
  }
}

}  // namespace entprop
