// Command-line front end: the five-unit worked example, the simulation
// tables, similarity reports, and standalone propensity estimation.
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entprop/experiments.hpp"
#include "entprop/glm.hpp"
#include "entprop/graph.hpp"
#include "entprop/io.hpp"
#include "entprop/netmodel.hpp"
#include "entprop/propensity.hpp"
#include "entprop/quadrature.hpp"
#include "entprop/rng.hpp"
#include "entprop/similarity.hpp"
#include "entprop/subclass.hpp"
#include "entprop/treatment.hpp"

namespace {

using nlohmann::json;

json table_to_json(const entprop::PropensityTable& table) {
  json rows = json::array();
  for (int i = 0; i < table.units(); ++i) {
    json row = json::array();
    for (int l = 0; l <= table.max_level(); ++l) {
      row.push_back(table.value(i, l));
    }
    rows.push_back({{"unit", i}, {"propensities", row}, {"overflow", table.overflow(i)}});
  }
  return rows;
}

int run_example_small(int draws, std::uint64_t seed, const std::string& json_path) {
  const entprop::SmallExampleReport report = entprop::run_small_example(draws, seed);
  entprop::print_report(report, std::cout);
  if (!json_path.empty()) {
    json doc;
    doc["draws"] = report.draws;
    doc["covariates"] = std::vector<double>(report.covariates.begin(), report.covariates.end());
    doc["treatments"] = std::vector<int>(report.z.begin(), report.z.end());
    doc["outcomes"] = std::vector<double>(report.y.begin(), report.y.end());
    doc["exact_table"] = table_to_json(report.exact_table);
    doc["mc_table"] = table_to_json(report.mc_table);
    doc["poisson_table"] = table_to_json(report.poisson_table);
    doc["poisson_coefficients"] = {report.poisson_coefficients[0],
                                   report.poisson_coefficients[1]};
    doc["similar_set_true"] = report.similar_set_true;
    doc["similar_set_poisson"] = report.similar_set_poisson;
    doc["tau2_true"] = report.tau2_true;
    doc["tau2_poisson"] = report.tau2_poisson;
    doc["expected_new_connections_unit2"] = report.expected_new_connections_unit2;
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "cannot open " << json_path << "\n";
      return 1;
    }
    out << doc.dump(2) << "\n";
  }
  return 0;
}

struct SimilarityModel {
  entprop::ModelFn score;
  entprop::GradientFn gradient;
  bool linear = false;
  Eigen::VectorXd beta;
};

SimilarityModel build_model(const entprop::KeyValueMap& kv, const std::string& prefix,
                            int dim) {
  const auto get = [&](const std::string& key) -> std::string {
    const auto it = kv.find(prefix + key);
    if (it == kv.end()) {
      throw std::invalid_argument("similarity config: missing key '" + prefix + key + "'");
    }
    return it->second;
  };
  const std::string kind = get("");

  SimilarityModel model;
  if (kind == "linear") {
    const std::vector<double> beta_values = entprop::parse_double_list(get("_beta"));
    if (static_cast<int>(beta_values.size()) != dim) {
      throw std::invalid_argument("similarity config: beta length must equal dim");
    }
    Eigen::VectorXd beta =
        Eigen::Map<const Eigen::VectorXd>(beta_values.data(), beta_values.size());
    model.linear = true;
    model.beta = beta;
    model.score = [beta](const Eigen::VectorXd& x) {
      return entprop::expit(beta.dot(x));
    };
    model.gradient = [beta](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double mu = entprop::expit(beta.dot(x));
      return mu * (1.0 - mu) * beta;
    };
    return model;
  }
  if (kind == "inner_product") {
    const double a = std::stod(get("_a"));
    const double b = std::stod(get("_b"));
    const double tau = std::stod(get("_tau"));
    const int n = std::stoi(get("_n"));
    const double scale = std::abs(b) * tau;
    model.score = [a, scale, n](const Eigen::VectorXd& x) {
      return (n - 1) * entprop::r_function(a, scale * x.norm());
    };
    model.gradient = [a, scale, n](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double norm = x.norm();
      if (norm == 0.0) return Eigen::VectorXd::Zero(x.size());
      const double s = scale * norm;
      static const entprop::GaussHermiteRule rule = entprop::gauss_hermite_rule(64);
      const double dr_dsigma = entprop::normal_expectation(
          [a, s](double z) {
            const double mu = entprop::expit(a + s * z);
            return z * mu * (1.0 - mu);
          },
          rule);
      return (n - 1) * dr_dsigma * scale / norm * x;
    };
    return model;
  }
  throw std::invalid_argument("similarity config: unknown model kind '" + kind + "'");
}

int run_similarity(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open " << config_path << "\n";
    return 1;
  }
  const entprop::KeyValueMap kv = entprop::read_key_values(in);
  const auto get_int = [&](const std::string& key, int fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
  };
  const auto get_double = [&](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
  };

  const int dim = get_int("dim", 3);
  const int samples = get_int("samples", 100000);
  const int units = get_int("units", 200);
  const int classes = get_int("classes", 5);
  const int replications = get_int("replications", 1);
  const double tau = get_double("covariate_tau", 1.0);
  const std::uint64_t seed = std::stoull(kv.count("seed") ? kv.at("seed") : "0");

  const SimilarityModel model_m = build_model(kv, "model_m", dim);
  const SimilarityModel model_e = build_model(kv, "model_e", dim);

  const auto sample_points = [&](int count, entprop::Rng& rng) {
    Eigen::MatrixXd points(count, dim);
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < dim; ++j) points(i, j) = rng.normal(0.0, tau);
    }
    return points;
  };

  // Approximate similarity over one shared sample of covariate draws.
  entprop::Rng rng(entprop::derive_stream({seed, 1}));
  const Eigen::MatrixXd points = sample_points(samples, rng);
  const entprop::GradientField field_m = entprop::evaluate_field(model_m.gradient, points);
  const entprop::GradientField field_e = entprop::evaluate_field(model_e.gradient, points);
  const double approx = entprop::approx_similarity(field_m, field_e);
  int excluded = 0;
  for (int i = 0; i < samples; ++i) {
    if (field_m.zero_gradient[i] || field_e.zero_gradient[i]) ++excluded;
  }

  // Exact similarity averaged over covariate-resample replications.
  double exact_sum = 0.0;
  for (int rep = 0; rep < replications; ++rep) {
    entprop::Rng rep_rng(entprop::derive_stream({seed, 2, static_cast<std::uint64_t>(rep)}));
    const Eigen::MatrixXd unit_points = sample_points(units, rep_rng);
    Eigen::VectorXd scores_m(units), scores_e(units);
    for (int i = 0; i < units; ++i) {
      scores_m[i] = model_m.score(unit_points.row(i).transpose());
      scores_e[i] = model_e.score(unit_points.row(i).transpose());
    }
    exact_sum += entprop::exact_similarity(
        entprop::quantile_subclassify(scores_m, classes),
        entprop::quantile_subclassify(scores_e, classes));
  }

  json doc;
  doc["exact"] = exact_sum / replications;
  doc["approx"] = approx;
  if (model_m.linear) {
    doc["projection"] = entprop::linear_projection_similarity(
        model_m.beta, entprop::mean_normalized_gradient(field_e));
  } else {
    doc["projection"] = nullptr;
  }
  doc["samples"] = samples;
  doc["excluded_zero_gradients"] = excluded;
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_simulate(const std::string& scenario, int sims, int units,
                 const std::string& sigma_list, int draws, int classes,
                 std::uint64_t seed, const std::string& out_path,
                 const std::string& estimator_list, int threads) {
  entprop::ExperimentConfig config;
  config.scenario = entprop::parse_scenario(scenario);
  config.sims = sims;
  config.units = units;
  config.sigma_grid = entprop::parse_double_list(sigma_list);
  config.propensity_draws = draws;
  config.classes = classes;
  config.seed = seed;
  config.threads = threads;
  if (!estimator_list.empty()) {
    std::stringstream ss(estimator_list);
    std::string name;
    while (std::getline(ss, name, ',')) {
      config.estimators.push_back(entprop::parse_estimator(name));
    }
  }

  const entprop::ExperimentResult result = entprop::run_scenario(config);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  entprop::write_result_csv(result, out);
  return 0;
}

int run_propensity(const std::string& model_path, const std::string& graph_path,
                   const std::string& treatment_tag, int draws, std::uint64_t seed) {
  const entprop::NetworkModel model = entprop::read_model_spec(model_path);
  std::ifstream graph_in(graph_path);
  if (!graph_in) {
    std::cerr << "cannot open " << graph_path << "\n";
    return 1;
  }
  const entprop::Graph g_minus = entprop::read_edge_list(graph_in);
  const entprop::TreatmentDef def = entprop::parse_treatment(treatment_tag);
  entprop::Rng rng(entprop::derive_stream({seed}));
  const entprop::PropensityTable table =
      entprop::estimate_entangled(model, g_minus, def, draws, rng);
  table.write_csv(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propensity-score analysis for treatments entangled by network evolution"};
  app.require_subcommand(1);

  // example-small
  auto* example = app.add_subcommand("example-small", "Five-unit worked example");
  int example_draws = 200000;
  std::uint64_t example_seed = 20240901;
  std::string example_json;
  example->add_option("--b", example_draws, "Monte-Carlo draws")->check(CLI::PositiveNumber);
  example->add_option("--seed", example_seed, "Master seed");
  example->add_option("--json", example_json, "Write the report as JSON to this path");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "RMSE simulation tables");
  std::string scenario, sigma_list, out_path, estimator_list;
  int sims = 500, units = 100, sim_draws = 500, classes = 10;
  std::uint64_t sim_seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  simulate->add_option("--scenario", scenario,
                       "sym_one_friend | multi_friend | asym_prob_ent")->required();
  simulate->add_option("--sims", sims, "Replications per sigma")->required();
  simulate->add_option("--n", units, "Units per replicate")->required();
  simulate->add_option("--sigma", sigma_list, "Comma-separated sigma grid")->required();
  simulate->add_option("--b", sim_draws, "Propensity draws for random_effect");
  simulate->add_option("--k", classes, "Subclass count");
  simulate->add_option("--seed", sim_seed, "Master seed")->required();
  simulate->add_option("--out", out_path, "Output CSV path")->required();
  simulate->add_option("--estimators", estimator_list,
                       "Comma list of true,misspecified,random_effect");
  simulate->add_option("--threads", threads, "Worker threads");

  // similarity
  auto* similarity = app.add_subcommand("similarity", "Model-similarity report (JSON)");
  std::string config_path;
  similarity->add_option("--config", config_path, "Flat key=value config")->required();

  // propensity
  auto* propensity = app.add_subcommand("propensity", "Propensity-table CSV");
  std::string model_path, graph_path, treatment_tag;
  int prop_draws = 10000;
  std::uint64_t prop_seed = 0;
  propensity->add_option("--model", model_path, "Model spec file")->required();
  propensity->add_option("--graph", graph_path, "Baseline edge-list file")->required();
  propensity->add_option("--treatment", treatment_tag,
                         "new_degree | at_least_one | more_than:<k> | neighborhood_grew")
      ->required();
  propensity->add_option("--b", prop_draws, "Monte-Carlo draws");
  propensity->add_option("--seed", prop_seed, "Master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (example->parsed()) {
      return run_example_small(example_draws, example_seed, example_json);
    }
    if (simulate->parsed()) {
      return run_simulate(scenario, sims, units, sigma_list, sim_draws, classes,
                          sim_seed, out_path, estimator_list, threads);
    }
    if (similarity->parsed()) {
      return run_similarity(config_path);
    }
    if (propensity->parsed()) {
      return run_propensity(model_path, graph_path, treatment_tag, prop_draws, prop_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
