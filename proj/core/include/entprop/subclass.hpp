// Subclassification of units on propensity scores, and causal-effect
// estimation within and across classes.
#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "entprop/rng.hpp"

namespace entprop {

struct Subclassification {
  std::vector<int> labels;  // class index per unit, in {0, ..., num_classes-1}
  int num_classes = 0;

  std::vector<int> class_sizes() const;
  // Empty classes are permitted but worth flagging to callers.
  std::vector<int> empty_classes() const;
};

// Successive-quantile bins, left-closed right-open except the last. Cut
// points are order statistics of the scores, so tied scores share a bin and
// bin sizes differ by at most the tie-group size.
Subclassification quantile_subclassify(const Eigen::VectorXd& scores, int num_classes);

// Lloyd iterations from k-means++ starts, 20 restarts, best within-cluster
// sum of squares kept. Deterministic given the stream: restart r uses a
// stream derived from (master, r) and ties resolve by restart index.
Subclassification kmeans_subclassify(const Eigen::MatrixXd& points, int num_classes,
                                     Rng& rng);

// Difference of treated and control outcome means within class k. Throws
// OneArmedClassError when the class lacks either arm.
double within_class_effect(int k, const Subclassification& sub,
                           const Eigen::VectorXi& z, const Eigen::VectorXd& y);

struct EffectEstimate {
  double value = 0.0;
  std::vector<double> per_class;  // NaN for dropped classes
  std::vector<int> class_sizes;
  std::vector<int> dropped_classes;
};

// Size-weighted combination of within-class estimates over two-armed
// classes; one-armed classes are dropped and the weight denominator reduced
// to the retained-unit count. Throws EstimationError when every class is
// one-armed.
EffectEstimate combined_effect(const Subclassification& sub, const Eigen::VectorXi& z,
                               const Eigen::VectorXd& y);

// Multivalued analogue: within each class, mean outcome at level m minus
// mean at level m-1, combined with full class-size weights over classes
// containing both levels. Units at other levels take part in the classes but
// not in the contrast.
double level_contrast_effect(const Subclassification& sub, const Eigen::VectorXi& z,
                             const Eigen::VectorXd& y, int level);

// CSV with header "unit,label".
void write_subclassification_csv(const Subclassification& sub, std::ostream& out);

}  // namespace entprop
