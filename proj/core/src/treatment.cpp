#include "entprop/treatment.hpp"

#include <charconv>
#include <stdexcept>

#include "entprop/errors.hpp"

namespace entprop {

TreatmentDef parse_treatment(std::string_view tag) {
  if (tag == "new_degree") return NewDegree{};
  if (tag == "at_least_one") return AtLeastOne{};
  if (tag == "neighborhood_grew") return NeighborhoodGrew{};
  constexpr std::string_view prefix = "more_than:";
  if (tag.substr(0, prefix.size()) == prefix) {
    const std::string_view num = tag.substr(prefix.size());
    int k = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc{} || ptr != num.data() + num.size() || k < 0) {
      throw std::invalid_argument("parse_treatment: bad threshold in '" + std::string(tag) + "'");
    }
    return MoreThan{k};
  }
  throw std::invalid_argument("parse_treatment: unknown tag '" + std::string(tag) + "'");
}

std::string treatment_tag(const TreatmentDef& def) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NewDegree>) return "new_degree";
        if constexpr (std::is_same_v<T, AtLeastOne>) return "at_least_one";
        if constexpr (std::is_same_v<T, MoreThan>)
          return "more_than:" + std::to_string(d.threshold);
        if constexpr (std::is_same_v<T, NeighborhoodGrew>) return "neighborhood_grew";
      },
      def);
}

int treatment_level(const TreatmentDef& def, int new_degree) {
  return std::visit(
      [new_degree](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NewDegree>) return new_degree;
        if constexpr (std::is_same_v<T, AtLeastOne>) return new_degree > 0 ? 1 : 0;
        if constexpr (std::is_same_v<T, MoreThan>) return new_degree > d.threshold ? 1 : 0;
        if constexpr (std::is_same_v<T, NeighborhoodGrew>) return new_degree > 0 ? 1 : 0;
      },
      def);
}

int max_treatment_level(const TreatmentDef& def, int n) {
  return std::holds_alternative<NewDegree>(def) ? n - 1 : 1;
}

Eigen::VectorXi apply_treatment(const TreatmentDef& def, const Graph& g_minus,
                                const Graph& g_plus) {
  const Graph diff = edge_diff(g_minus, g_plus);  // validates the supergraph pair
  const int n = diff.size();
  Eigen::VectorXi z(n);
  for (int i = 0; i < n; ++i) {
    z[i] = treatment_level(def, diff.degree(i));
  }
  return z;
}

Eigen::VectorXd constraint_residual(const EntanglementConstraint& constraint,
                                    const Eigen::VectorXi& z, const Graph& g_minus,
                                    const Graph& g_plus) {
  return std::visit(
      [&](const auto& c) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DegreeDiffConstraint>) {
          if (z.size() != g_minus.size() || g_minus.size() != g_plus.size()) {
            throw std::invalid_argument("constraint_residual: dimension mismatch");
          }
          const Graph diff = edge_diff(g_minus, g_plus);
          Eigen::VectorXd residual(z.size());
          for (int i = 0; i < diff.size(); ++i) {
            residual[i] = static_cast<double>(z[i]) - diff.degree(i);
          }
          return residual;
        } else {
          if (z.size() != c.n) {
            throw std::invalid_argument("constraint_residual: dimension mismatch");
          }
          Eigen::VectorXd residual(1);
          residual[0] = static_cast<double>(z.sum()) - c.n * c.p;
          return residual;
        }
      },
      constraint);
}

}  // namespace entprop
