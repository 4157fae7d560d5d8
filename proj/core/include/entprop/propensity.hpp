// Propensity-score estimation for entangled treatments. The entangled route
// samples post-treatment networks and tabulates empirical treatment-level
// frequencies; the exact route uses the Poisson-binomial law of each unit's
// new degree; the brute-force route enumerates every completion of the
// baseline graph. Classical (entanglement-blind) baselines fit unit-level
// regressions instead.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include <Eigen/Core>

#include "entprop/graph.hpp"
#include "entprop/netmodel.hpp"
#include "entprop/rng.hpp"
#include "entprop/treatment.hpp"

namespace entprop {

// N x (L_max+1) matrix of P(Z_i = l), plus one overflow bucket per unit
// holding P(Z_i > L_max). Rows sum to one with the overflow included.
class PropensityTable {
 public:
  PropensityTable(Eigen::MatrixXd values, Eigen::VectorXd overflow);

  int units() const { return static_cast<int>(values_.rows()); }
  int max_level() const { return static_cast<int>(values_.cols()) - 1; }

  double value(int i, int l) const { return values_(i, l); }
  double overflow(int i) const { return overflow_[i]; }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd level_column(int l) const { return values_.col(l); }

  // CSV with header "unit,l0,l1,...,overflow".
  void write_csv(std::ostream& out) const;

 private:
  Eigen::MatrixXd values_;
  Eigen::VectorXd overflow_;
};

// Monte-Carlo propensities: B sampled post-treatment networks, empirical
// frequency of each treatment level. Draw b uses a stream derived from
// (rng-provided master, b), so a parallel implementation reproduces the
// sequential result exactly.
PropensityTable estimate_entangled(const NetworkModel& model, const Graph& g_minus,
                                   const TreatmentDef& def, int draws, Rng& rng,
                                   std::optional<int> l_max = std::nullopt,
                                   int threads = 1);

// Exact propensities for degree-based treatments: the new degree of unit i
// is a sum of independent non-identical Bernoullis over the free dyads of
// row i, so its law is Poisson-binomial, computed by the O(n^2) convolution
// recurrence.
PropensityTable exact_degree_propensity(const NetworkModel& model,
                                        const Graph& g_minus, const TreatmentDef& def,
                                        std::optional<int> l_max = std::nullopt);

// Exhaustive enumeration of all completions of g_minus, each weighted by its
// product probability. Throws CapacityError beyond 24 free dyads.
PropensityTable brute_force_propensity(const NetworkModel& model,
                                       const Graph& g_minus, const TreatmentDef& def,
                                       std::optional<int> l_max = std::nullopt);

// Poisson regression of counts on (1, x); rows are Poisson pmf values at the
// fitted unit rates.
PropensityTable classical_poisson_propensity(const Eigen::VectorXi& z,
                                             const Eigen::VectorXd& x,
                                             std::optional<int> l_max = std::nullopt);

// Logistic regression of a binary treatment on (1, row sums of the dyadic
// covariates); returns fitted probabilities.
Eigen::VectorXd classical_logistic_propensity(const Eigen::VectorXi& z,
                                              const Eigen::MatrixXd& dyadic_covariates);

}  // namespace entprop
