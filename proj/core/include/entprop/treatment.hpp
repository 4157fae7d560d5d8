// Treatment definitions mapping network evolution to per-unit treatments,
// and entanglement constraints certifying their joint consistency.
#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "entprop/graph.hpp"

namespace entprop {

// Z_i = number of new connections made between the two snapshots.
struct NewDegree {};
// Z_i = 1 if the unit made at least one new connection.
struct AtLeastOne {};
// Z_i = 1 if the unit made strictly more than `threshold` new connections.
struct MoreThan {
  int threshold = 0;
};
// Z_i = 1 if the unit's degree grew.
struct NeighborhoodGrew {};

using TreatmentDef = std::variant<NewDegree, AtLeastOne, MoreThan, NeighborhoodGrew>;

// CLI tags: new_degree | at_least_one | more_than:<k> | neighborhood_grew.
TreatmentDef parse_treatment(std::string_view tag);
std::string treatment_tag(const TreatmentDef& def);

// All four variants are functions of the unit's new degree alone.
int treatment_level(const TreatmentDef& def, int new_degree);

// Largest level the definition can produce on n units (new_degree: n-1;
// indicator variants: 1).
int max_treatment_level(const TreatmentDef& def, int n);

Eigen::VectorXi apply_treatment(const TreatmentDef& def, const Graph& g_minus,
                                const Graph& g_plus);

// Residual Z - (G+ - G-) 1; all-zero certifies consistency.
struct DegreeDiffConstraint {};
// Residual Z^T 1 - n p, the fixed-size design constraint.
struct FixedTotalConstraint {
  int n = 0;
  double p = 0.0;
};

using EntanglementConstraint = std::variant<DegreeDiffConstraint, FixedTotalConstraint>;

Eigen::VectorXd constraint_residual(const EntanglementConstraint& constraint,
                                    const Eigen::VectorXi& z, const Graph& g_minus,
                                    const Graph& g_plus);

}  // namespace entprop
