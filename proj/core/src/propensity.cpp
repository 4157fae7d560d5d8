#include "entprop/propensity.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "entprop/errors.hpp"
#include "entprop/glm.hpp"

namespace entprop {
namespace {

struct Dyad {
  int i;
  int j;
  double p;
};

// Free dyads of the baseline graph, one entry per sampled Bernoulli.
std::vector<Dyad> free_dyads(const NetworkModel& model, const Graph& g_minus) {
  const int n = g_minus.size();
  const bool directed = g_minus.directed();
  std::vector<Dyad> dyads;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || g_minus.has_edge(i, j)) continue;
      dyads.push_back({i, j, edge_prob(model, i, j)});
    }
  }
  return dyads;
}

int resolve_l_max(const TreatmentDef& def, int n, std::optional<int> l_max) {
  const int resolved = l_max.value_or(max_treatment_level(def, n));
  if (resolved < 0) {
    throw std::invalid_argument("propensity: l_max must be nonnegative");
  }
  return resolved;
}

PropensityTable table_from_level_mass(const Eigen::MatrixXd& mass, int l_max) {
  // mass columns may exceed l_max; fold the excess into the overflow bucket.
  const int n = static_cast<int>(mass.rows());
  const int kept = std::min<int>(l_max + 1, static_cast<int>(mass.cols()));
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, l_max + 1);
  values.leftCols(kept) = mass.leftCols(kept);
  Eigen::VectorXd overflow = Eigen::VectorXd::Zero(n);
  for (int l = kept; l < mass.cols(); ++l) {
    overflow += mass.col(l);
  }
  return PropensityTable(std::move(values), std::move(overflow));
}

}  // namespace

PropensityTable::PropensityTable(Eigen::MatrixXd values, Eigen::VectorXd overflow)
    : values_(std::move(values)), overflow_(std::move(overflow)) {
  if (values_.rows() != overflow_.size()) {
    throw std::invalid_argument("PropensityTable: overflow length must match row count");
  }
  constexpr double kSlack = 1e-9;
  for (int i = 0; i < values_.rows(); ++i) {
    double row_sum = overflow_[i];
    for (int l = 0; l < values_.cols(); ++l) {
      double& v = values_(i, l);
      if (v < 0.0 && v > -1e-12) v = 0.0;  // convolution round-off
      if (v < 0.0 || v > 1.0 + kSlack) {
        throw std::invalid_argument("PropensityTable: entry outside [0,1]");
      }
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > kSlack) {
      throw std::invalid_argument("PropensityTable: row mass does not sum to one");
    }
  }
}

void PropensityTable::write_csv(std::ostream& out) const {
  out << "unit";
  for (int l = 0; l <= max_level(); ++l) out << ",l" << l;
  out << ",overflow\n";
  char buffer[32];
  for (int i = 0; i < units(); ++i) {
    out << i;
    for (int l = 0; l <= max_level(); ++l) {
      std::snprintf(buffer, sizeof(buffer), "%.10g", values_(i, l));
      out << "," << buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "%.10g", overflow_[i]);
    out << "," << buffer << "\n";
  }
}

PropensityTable estimate_entangled(const NetworkModel& model, const Graph& g_minus,
                                   const TreatmentDef& def, int draws, Rng& rng,
                                   std::optional<int> l_max, int threads) {
  if (draws < 1) {
    throw std::invalid_argument("estimate_entangled: need at least one draw");
  }
  const int n = g_minus.size();
  const int levels = resolve_l_max(def, n, l_max);
  const std::uint64_t master = rng.next_u64();

  // Materialize the dyad probabilities once; the draw loop then samples from
  // a plain matrix instead of re-evaluating the model per dyad per draw.
  EdgeProbMatrixSpec cached;
  cached.directed = model_directed(model);
  cached.probs = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = cached.directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || g_minus.has_edge(i, j)) continue;
      cached.probs(i, j) = edge_prob(model, i, j);
      if (!cached.directed) cached.probs(j, i) = cached.probs(i, j);
    }
  }
  const NetworkModel sampling_model = cached;

  using Counts = std::vector<std::uint64_t>;  // n x (levels+2), last = overflow
  const std::size_t stride = static_cast<std::size_t>(levels) + 2;
  const auto accumulate_range = [&](int begin, int end, Counts& counts) {
    for (int b = begin; b < end; ++b) {
      Rng draw_rng(derive_stream({master, static_cast<std::uint64_t>(b)}));
      const Graph g_plus = sample_posttreatment(sampling_model, g_minus, draw_rng);
      const Eigen::VectorXi z = apply_treatment(def, g_minus, g_plus);
      for (int i = 0; i < n; ++i) {
        const int slot = z[i] <= levels ? z[i] : levels + 1;
        ++counts[i * stride + slot];
      }
    }
  };

  const int workers = std::max(1, std::min(threads, draws));
  std::vector<Counts> partials(workers, Counts(static_cast<std::size_t>(n) * stride, 0));
  if (workers == 1) {
    accumulate_range(0, draws, partials[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (draws + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(draws, begin + chunk);
      pool.emplace_back(accumulate_range, begin, end, std::ref(partials[w]));
    }
    for (auto& t : pool) t.join();
  }

  Counts counts(static_cast<std::size_t>(n) * stride, 0);
  for (const Counts& partial : partials) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += partial[k];
  }

  Eigen::MatrixXd values(n, levels + 1);
  Eigen::VectorXd overflow(n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l <= levels; ++l) {
      values(i, l) = static_cast<double>(counts[i * stride + l]) / draws;
    }
    overflow[i] = static_cast<double>(counts[i * stride + levels + 1]) / draws;
  }
  return PropensityTable(std::move(values), std::move(overflow));
}

PropensityTable exact_degree_propensity(const NetworkModel& model,
                                        const Graph& g_minus, const TreatmentDef& def,
                                        std::optional<int> l_max) {
  const int n = g_minus.size();
  if (model_size(model) != n || model_directed(model) != g_minus.directed()) {
    throw std::invalid_argument("exact_degree_propensity: model/graph mismatch");
  }
  const int levels = resolve_l_max(def, n, l_max);
  const bool directed = g_minus.directed();

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);  // columns: new degree 0..n-1
  std::vector<double> pmf;
  for (int i = 0; i < n; ++i) {
    pmf.assign(1, 1.0);
    for (int j = 0; j < n; ++j) {
      if (i == j || g_minus.has_edge(i, j)) continue;
      const double p = directed ? edge_prob(model, i, j)
                                : edge_prob(model, std::min(i, j), std::max(i, j));
      pmf.push_back(0.0);
      for (int d = static_cast<int>(pmf.size()) - 1; d >= 1; --d) {
        pmf[d] = pmf[d] * (1.0 - p) + pmf[d - 1] * p;
      }
      pmf[0] *= (1.0 - p);
    }
    for (std::size_t deg = 0; deg < pmf.size(); ++deg) {
      mass(i, treatment_level(def, static_cast<int>(deg))) += pmf[deg];
    }
  }
  return table_from_level_mass(mass, levels);
}

PropensityTable brute_force_propensity(const NetworkModel& model,
                                       const Graph& g_minus, const TreatmentDef& def,
                                       std::optional<int> l_max) {
  const int n = g_minus.size();
  if (model_size(model) != n || model_directed(model) != g_minus.directed()) {
    throw std::invalid_argument("brute_force_propensity: model/graph mismatch");
  }
  const std::vector<Dyad> dyads = free_dyads(model, g_minus);
  if (dyads.size() > 24) {
    throw CapacityError("brute_force_propensity: more than 24 free dyads");
  }
  const int levels = resolve_l_max(def, n, l_max);
  const bool directed = g_minus.directed();

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> new_degree(n, 0);

  const auto recurse = [&](const auto& self, std::size_t idx, double weight) -> void {
    if (weight == 0.0) return;
    if (idx == dyads.size()) {
      for (int i = 0; i < n; ++i) {
        mass(i, treatment_level(def, new_degree[i])) += weight;
      }
      return;
    }
    const Dyad& dyad = dyads[idx];
    self(self, idx + 1, weight * (1.0 - dyad.p));
    ++new_degree[dyad.i];
    if (!directed) ++new_degree[dyad.j];
    self(self, idx + 1, weight * dyad.p);
    --new_degree[dyad.i];
    if (!directed) --new_degree[dyad.j];
  };
  recurse(recurse, 0, 1.0);

  return table_from_level_mass(mass, levels);
}

PropensityTable classical_poisson_propensity(const Eigen::VectorXi& z,
                                             const Eigen::VectorXd& x,
                                             std::optional<int> l_max) {
  const int n = static_cast<int>(z.size());
  if (x.size() != n) {
    throw std::invalid_argument("classical_poisson_propensity: length mismatch");
  }
  if (n < 3) {
    throw std::invalid_argument("classical_poisson_propensity: need at least 3 units");
  }
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = x;
  const GlmFit fit = fit_poisson(z.cast<double>(), design);

  const int levels = l_max.value_or(n - 1);
  Eigen::MatrixXd values(n, levels + 1);
  Eigen::VectorXd overflow(n);
  for (int i = 0; i < n; ++i) {
    const double rate =
        std::max(std::exp(fit.coefficients[0] + fit.coefficients[1] * x[i]), 1e-300);
    double total = 0.0;
    for (int l = 0; l <= levels; ++l) {
      values(i, l) = std::exp(-rate + l * std::log(rate) - std::lgamma(l + 1.0));
      total += values(i, l);
    }
    overflow[i] = std::max(0.0, 1.0 - total);
  }
  return PropensityTable(std::move(values), std::move(overflow));
}

Eigen::VectorXd classical_logistic_propensity(const Eigen::VectorXi& z,
                                              const Eigen::MatrixXd& dyadic_covariates) {
  const int n = static_cast<int>(z.size());
  if (dyadic_covariates.rows() != n || dyadic_covariates.cols() != n) {
    throw std::invalid_argument("classical_logistic_propensity: covariate shape mismatch");
  }
  if (n < 3) {
    throw std::invalid_argument("classical_logistic_propensity: need at least 3 units");
  }
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = dyadic_covariates.rowwise().sum();
  const GlmFit fit = fit_logistic(z.cast<double>(), design);
  Eigen::VectorXd probs(n);
  for (int i = 0; i < n; ++i) {
    probs[i] = expit(fit.coefficients[0] + fit.coefficients[1] * design(i, 1));
  }
  return probs;
}

}  // namespace entprop
