#include "entprop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "entprop/errors.hpp"
#include "entprop/glm.hpp"
#include "entprop/netmodel.hpp"
#include "entprop/similarity.hpp"
#include "entprop/subclass.hpp"

namespace entprop {

Scenario parse_scenario(std::string_view name) {
  if (name == "sym_one_friend") return Scenario::SymOneFriend;
  if (name == "multi_friend") return Scenario::MultiFriend;
  if (name == "asym_prob_ent") return Scenario::AsymProbEnt;
  throw std::invalid_argument("parse_scenario: unknown scenario '" + std::string(name) +
                              "' (small_example runs via example-small)");
}

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::SymOneFriend: return "sym_one_friend";
    case Scenario::MultiFriend: return "multi_friend";
    case Scenario::AsymProbEnt: return "asym_prob_ent";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "true") return Estimator::TrueModel;
  if (name == "misspecified") return Estimator::Misspecified;
  if (name == "random_effect") return Estimator::RandomEffect;
  throw std::invalid_argument("parse_estimator: unknown estimator '" + std::string(name) + "'");
}

std::string estimator_name(Estimator estimator) {
  switch (estimator) {
    case Estimator::TrueModel: return "true";
    case Estimator::Misspecified: return "misspecified";
    case Estimator::RandomEffect: return "random_effect";
  }
  return "unknown";
}

ReplicateData generate_replicate(Scenario scenario, double sigma, int units, Rng& rng) {
  if (sigma <= 0.0) {
    throw std::invalid_argument("generate_replicate: sigma must be positive");
  }
  if (units < 2) {
    throw std::invalid_argument("generate_replicate: need at least two units");
  }
  const bool directed = scenario == Scenario::AsymProbEnt;
  const double effect_mean = scenario == Scenario::MultiFriend ? -2.0 : -5.0;

  Eigen::VectorXd node_effects(units);
  for (int i = 0; i < units; ++i) {
    node_effects[i] = rng.normal(effect_mean, sigma);
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(units, units);
  for (int i = 0; i < units; ++i) {
    for (int j = directed ? 0 : i + 1; j < units; ++j) {
      if (i == j) continue;
      x(i, j) = rng.normal();
      if (!directed) x(j, i) = x(i, j);
    }
  }

  const DyadicLogisticSpec model{node_effects, 1.0, x, directed};
  Graph g_minus(units, directed);
  Graph g_plus = sample_posttreatment(model, g_minus, rng);

  const TreatmentDef treatment =
      scenario == Scenario::MultiFriend ? TreatmentDef(MoreThan{10}) : TreatmentDef(AtLeastOne{});
  Eigen::VectorXi z = apply_treatment(treatment, g_minus, g_plus);

  Eigen::VectorXd y(units);
  for (int i = 0; i < units; ++i) {
    y[i] = 25.0 * node_effects[i] + rng.normal(0.0, kOutcomeNoiseSd) + kTrueAte * z[i];
  }

  return ReplicateData{std::move(g_minus), std::move(g_plus), std::move(node_effects),
                       std::move(x),       treatment,         std::move(z),
                       std::move(y)};
}

namespace {

// Edge probabilities of the generating model with the dyadic covariate
// integrated out: r((a_i + a_j)/2, b * sd).
EdgeProbMatrixSpec marginalize_dyadic_covariates(const Eigen::VectorXd& node_effects,
                                                 double b_times_sd, bool directed) {
  const int n = static_cast<int>(node_effects.size());
  EdgeProbMatrixSpec spec;
  spec.directed = directed;
  spec.probs = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double q = r_function(0.5 * (node_effects[i] + node_effects[j]),
                                  std::abs(b_times_sd));
      spec.probs(i, j) = q;
      spec.probs(j, i) = q;
    }
  }
  return spec;
}

}  // namespace

double estimate_replicate(const ReplicateData& data, Estimator estimator,
                          int propensity_draws, int classes, Rng& rng) {
  const int n = data.g_minus.size();
  Eigen::VectorXd scores;
  switch (estimator) {
    case Estimator::TrueModel: {
      const EdgeProbMatrixSpec marginal = marginalize_dyadic_covariates(
          data.node_effects, 1.0, data.g_minus.directed());
      const PropensityTable table =
          exact_degree_propensity(marginal, data.g_minus, data.treatment);
      scores = table.level_column(1);
      break;
    }
    case Estimator::Misspecified: {
      scores = classical_logistic_propensity(data.z, data.dyadic_covariates);
      break;
    }
    case Estimator::RandomEffect: {
      const NodeEffectFitSpec fit = fit_node_effect_model(
          data.g_plus, data.dyadic_covariates, /*directed=*/true, kRandomEffectRidge);
      const Graph empty_directed(n, /*directed=*/true);
      const PropensityTable table = estimate_entangled(
          fit, empty_directed, data.treatment, propensity_draws, rng);
      scores = table.level_column(1);
      break;
    }
  }
  const Subclassification sub = quantile_subclassify(scores, classes);
  return combined_effect(sub, data.z, data.y).value;
}

double rmse(const std::vector<double>& estimates, double true_ate) {
  if (estimates.empty()) {
    throw std::invalid_argument("rmse: no estimates");
  }
  double acc = 0.0;
  for (double est : estimates) {
    const double err = est - true_ate;
    acc += err * err;
  }
  return std::sqrt(acc / static_cast<double>(estimates.size()));
}

namespace {

std::vector<Estimator> default_estimators(Scenario scenario) {
  if (scenario == Scenario::MultiFriend) {
    return {Estimator::TrueModel, Estimator::Misspecified, Estimator::RandomEffect};
  }
  return {Estimator::TrueModel, Estimator::Misspecified};
}

}  // namespace

ExperimentResult run_scenario(const ExperimentConfig& config) {
  if (config.sims < 1) {
    throw std::invalid_argument("run_scenario: sims must be at least 1");
  }
  if (config.sigma_grid.empty()) {
    throw std::invalid_argument("run_scenario: empty sigma grid");
  }
  for (double sigma : config.sigma_grid) {
    if (sigma <= 0.0) {
      throw std::invalid_argument("run_scenario: sigma values must be positive");
    }
  }

  ExperimentConfig resolved = config;
  if (resolved.estimators.empty()) {
    resolved.estimators = default_estimators(resolved.scenario);
  }
  const int num_sigmas = static_cast<int>(resolved.sigma_grid.size());
  const int num_estimators = static_cast<int>(resolved.estimators.size());
  const std::uint64_t scenario_id = static_cast<std::uint64_t>(resolved.scenario);

  // estimates[(sigma, estimator)][replicate]; NaN marks an excluded replicate.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> estimates(
      static_cast<std::size_t>(num_sigmas) * num_estimators,
      std::vector<double>(resolved.sims, nan));

  const auto run_task = [&](int sigma_idx, int rep) {
    Rng gen_rng(derive_stream({resolved.seed, scenario_id,
                               static_cast<std::uint64_t>(sigma_idx),
                               static_cast<std::uint64_t>(rep), 0}));
    const ReplicateData data = generate_replicate(
        resolved.scenario, resolved.sigma_grid[sigma_idx], resolved.units, gen_rng);
    for (int e = 0; e < num_estimators; ++e) {
      Rng est_rng(derive_stream({resolved.seed, scenario_id,
                                 static_cast<std::uint64_t>(sigma_idx),
                                 static_cast<std::uint64_t>(rep),
                                 1 + static_cast<std::uint64_t>(e)}));
      try {
        estimates[static_cast<std::size_t>(sigma_idx) * num_estimators + e][rep] =
            estimate_replicate(data, resolved.estimators[e],
                               resolved.propensity_draws, resolved.classes, est_rng);
      } catch (const GlmError&) {
      } catch (const EstimationError&) {
      } catch (const FitError&) {
      }
    }
  };

  const long total_tasks = static_cast<long>(num_sigmas) * resolved.sims;
  const int workers = std::max<long>(1, std::min<long>(resolved.threads, total_tasks));
  if (workers == 1) {
    for (long task = 0; task < total_tasks; ++task) {
      run_task(static_cast<int>(task / resolved.sims),
               static_cast<int>(task % resolved.sims));
    }
  } else {
    std::atomic<long> next_task{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (long task = next_task.fetch_add(1); task < total_tasks;
             task = next_task.fetch_add(1)) {
          run_task(static_cast<int>(task / resolved.sims),
                   static_cast<int>(task % resolved.sims));
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  result.config = resolved;
  for (int s = 0; s < num_sigmas; ++s) {
    for (int e = 0; e < num_estimators; ++e) {
      const auto& cell_estimates = estimates[static_cast<std::size_t>(s) * num_estimators + e];
      CellResult cell;
      cell.sigma = resolved.sigma_grid[s];
      cell.estimator = resolved.estimators[e];
      std::vector<double> kept;
      kept.reserve(cell_estimates.size());
      for (double est : cell_estimates) {
        if (std::isnan(est)) {
          ++cell.excluded;
        } else {
          kept.push_back(est);
        }
      }
      cell.rmse = kept.empty() ? nan : rmse(kept, kTrueAte);
      if (resolved.keep_estimates) {
        cell.estimates = std::move(kept);
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

void write_result_csv(const ExperimentResult& result, std::ostream& out) {
  out << "scenario,sigma,estimator,rmse,excluded\n";
  char buffer[64];
  for (const CellResult& cell : result.cells) {
    std::snprintf(buffer, sizeof(buffer), "%g", cell.sigma);
    out << scenario_name(result.config.scenario) << "," << buffer << ","
        << estimator_name(cell.estimator) << ",";
    std::snprintf(buffer, sizeof(buffer), "%.10g", cell.rmse);
    out << buffer << "," << cell.excluded << "\n";
  }
}

SmallExampleReport run_small_example(int draws, std::uint64_t seed) {
  Eigen::VectorXd covariates(5);
  covariates << -5.0, -1.0, 0.0, 3.0, 10.0;
  Eigen::VectorXi z(5);
  Eigen::VectorXd y(5);
  y << 0.0, 0.0, 1.0, 1.0, 0.0;

  const ProductExpSpec model{covariates, 1.0};
  Graph g_minus(5, false);
  Graph g_plus(5, false);
  g_plus.add_edge(1, 4);
  g_plus.add_edge(1, 3);
  g_plus.add_edge(2, 4);
  g_plus.add_edge(0, 4);
  g_plus.add_edge(3, 4);
  z = apply_treatment(NewDegree{}, g_minus, g_plus);

  PropensityTable exact_table =
      brute_force_propensity(model, g_minus, NewDegree{}, 4);
  Rng rng(derive_stream({seed, 1}));
  PropensityTable mc_table =
      estimate_entangled(model, g_minus, NewDegree{}, draws, rng, 4);
  PropensityTable poisson_table = classical_poisson_propensity(z, covariates, 4);

  Eigen::MatrixXd design(5, 2);
  design.col(0).setOnes();
  design.col(1) = covariates;
  const GlmFit poisson_fit = fit_poisson(z.cast<double>(), design);

  // Pair-cluster (level-1, level-2) propensities into two groups per model.
  const auto similar_set = [&](const PropensityTable& table,
                               std::uint64_t substream) {
    Eigen::MatrixXd pairs(table.units(), 2);
    pairs.col(0) = table.level_column(1);
    pairs.col(1) = table.level_column(2);
    Rng cluster_rng(derive_stream({seed, substream}));
    return kmeans_subclassify(pairs, 2, cluster_rng);
  };
  const Subclassification sub_true = similar_set(exact_table, 2);
  const Subclassification sub_poisson = similar_set(poisson_table, 3);

  // Report the cluster that supports the level-2 versus level-1 contrast.
  const auto contrast_set = [&](const Subclassification& sub) {
    std::vector<int> units;
    for (int k = 0; k < sub.num_classes; ++k) {
      bool has_upper = false, has_lower = false;
      for (int i = 0; i < 5; ++i) {
        if (sub.labels[i] != k) continue;
        has_upper |= z[i] == 2;
        has_lower |= z[i] == 1;
      }
      if (has_upper && has_lower) {
        for (int i = 0; i < 5; ++i) {
          if (sub.labels[i] == k) units.push_back(i);
        }
      }
    }
    return units;
  };

  SmallExampleReport report{
      covariates,
      z,
      y,
      std::move(exact_table),
      std::move(mc_table),
      std::move(poisson_table),
      {poisson_fit.coefficients[0], poisson_fit.coefficients[1]},
      contrast_set(sub_true),
      contrast_set(sub_poisson),
      level_contrast_effect(sub_true, z, y, 2),
      level_contrast_effect(sub_poisson, z, y, 2),
      0.0,
      draws};

  for (int l = 0; l <= report.exact_table.max_level(); ++l) {
    report.expected_new_connections_unit2 += l * report.exact_table.value(2, l);
  }
  return report;
}

namespace {

void print_table(const PropensityTable& table, std::ostream& out) {
  out << "unit";
  for (int l = 0; l <= table.max_level(); ++l) out << "    l=" << l;
  out << "\n";
  char buffer[32];
  for (int i = 0; i < table.units(); ++i) {
    out << "   " << i;
    for (int l = 0; l <= table.max_level(); ++l) {
      std::snprintf(buffer, sizeof(buffer), "%7.2f", table.value(i, l));
      out << buffer;
    }
    out << "\n";
  }
}

void print_units(const std::vector<int>& units, std::ostream& out) {
  out << "{";
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i > 0) out << ",";
    out << units[i];
  }
  out << "}";
}

}  // namespace

void print_report(const SmallExampleReport& report, std::ostream& out) {
  out << "Five-unit worked example (unit ids are 0-based)\n";
  out << "covariates x = " << report.covariates.transpose() << "\n";
  out << "treatments z = " << report.z.transpose() << "\n";
  out << "outcomes   y = " << report.y.transpose() << "\n\n";
  out << "Entangled propensities, exact enumeration:\n";
  print_table(report.exact_table, out);
  out << "\nEntangled propensities, " << report.draws << " Monte-Carlo draws:\n";
  print_table(report.mc_table, out);
  out << "\nPoisson-regression baseline (coefficients "
      << report.poisson_coefficients[0] << ", " << report.poisson_coefficients[1]
      << "):\n";
  print_table(report.poisson_table, out);
  out << "\nExpected new connections for unit 2: "
      << report.expected_new_connections_unit2 << "\n";
  out << "Similar-pair set, entangled model:  ";
  print_units(report.similar_set_true, out);
  out << "\nSimilar-pair set, Poisson baseline: ";
  print_units(report.similar_set_poisson, out);
  out << "\ntau_2 (entangled) = " << report.tau2_true
      << "\ntau_2 (baseline)  = " << report.tau2_poisson << "\n";
}

}  // namespace entprop
