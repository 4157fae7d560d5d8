#include "entprop/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace entprop {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string require(const KeyValueMap& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw std::invalid_argument("model spec: missing key '" + key + "'");
  }
  return it->second;
}

double require_double(const KeyValueMap& kv, const std::string& key) {
  return std::stod(require(kv, key));
}

bool require_bool(const KeyValueMap& kv, const std::string& key) {
  const std::string v = require(kv, key);
  if (v == "0" || v == "false") return false;
  if (v == "1" || v == "true") return true;
  throw std::invalid_argument("model spec: key '" + key + "' must be 0/1");
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd load_covariates(const KeyValueMap& kv, const std::string& spec_path) {
  const std::filesystem::path side =
      std::filesystem::path(spec_path).parent_path() / require(kv, "covariates");
  std::ifstream in(side);
  if (!in) {
    throw std::invalid_argument("model spec: cannot open covariates file " + side.string());
  }
  return read_csv_matrix(in);
}

}  // namespace

KeyValueMap read_key_values(std::istream& in) {
  KeyValueMap kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("read_key_values: expected key=value, got '" + line + "'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& text, char sep) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  return values;
}

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    rows.push_back(parse_double_list(line));
    if (rows.back().size() != rows.front().size()) {
      throw std::invalid_argument("read_csv_matrix: ragged rows");
    }
  }
  if (rows.empty()) {
    throw std::invalid_argument("read_csv_matrix: empty input");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

void write_csv_matrix(const Eigen::MatrixXd& m, std::ostream& out) {
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << m(i, j);
    }
    out << "\n";
  }
}

NetworkModel read_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("read_model_spec: cannot open " + path);
  }
  const KeyValueMap kv = read_key_values(in);
  const std::string kind = require(kv, "model");

  if (kind == "product_exp") {
    ProductExpSpec spec;
    spec.covariates = to_vector(parse_double_list(require(kv, "x")));
    spec.intercept = require_double(kv, "intercept");
    return spec;
  }
  if (kind == "inner_product") {
    InnerProductSpec spec;
    spec.a = require_double(kv, "a");
    spec.b = require_double(kv, "b");
    spec.tau = require_double(kv, "tau");
    spec.covariates = load_covariates(kv, path);
    return spec;
  }
  if (kind == "dyadic_logistic") {
    DyadicLogisticSpec spec;
    spec.node_effects = to_vector(parse_double_list(require(kv, "a")));
    spec.b = require_double(kv, "b");
    spec.directed = require_bool(kv, "directed");
    spec.dyadic_covariates = load_covariates(kv, path);
    if (spec.dyadic_covariates.rows() != spec.node_effects.size() ||
        spec.dyadic_covariates.cols() != spec.node_effects.size()) {
      throw std::invalid_argument("read_model_spec: covariate matrix must be N x N");
    }
    return spec;
  }
  if (kind == "node_effect") {
    NodeEffectFitSpec spec;
    spec.intercept = require_double(kv, "c");
    spec.node_effects = to_vector(parse_double_list(require(kv, "u")));
    spec.slope = require_double(kv, "d");
    spec.directed = require_bool(kv, "directed");
    spec.ridge_lambda = require_double(kv, "ridge_lambda");
    spec.dyadic_covariates = load_covariates(kv, path);
    spec.converged = true;
    return spec;
  }
  if (kind == "edge_probs") {
    EdgeProbMatrixSpec spec;
    spec.directed = require_bool(kv, "directed");
    spec.probs = load_covariates(kv, path);
    return spec;
  }
  throw std::invalid_argument("read_model_spec: unknown model kind '" + kind + "'");
}

namespace {

std::string covariate_sidecar(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + "_covariates.csv";
}

void write_covariates(const Eigen::MatrixXd& m, const std::string& spec_path,
                      std::ostream& spec_out) {
  const std::string side = covariate_sidecar(spec_path);
  std::ofstream out(side);
  if (!out) {
    throw std::invalid_argument("write_model_spec: cannot open " + side);
  }
  write_csv_matrix(m, out);
  spec_out << "covariates=" << std::filesystem::path(side).filename().string() << "\n";
}

std::string join(const Eigen::VectorXd& v) {
  std::ostringstream ss;
  ss.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) ss << ",";
    ss << v[i];
  }
  return ss.str();
}

}  // namespace

void write_model_spec(const NetworkModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("write_model_spec: cannot open " + path);
  }
  out.precision(17);
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ProductExpSpec>) {
          out << "model=product_exp\n"
              << "intercept=" << spec.intercept << "\n"
              << "x=" << join(spec.covariates) << "\n";
        } else if constexpr (std::is_same_v<T, InnerProductSpec>) {
          out << "model=inner_product\n"
              << "a=" << spec.a << "\nb=" << spec.b << "\ntau=" << spec.tau << "\n";
          write_covariates(spec.covariates, path, out);
        } else if constexpr (std::is_same_v<T, DyadicLogisticSpec>) {
          out << "model=dyadic_logistic\n"
              << "a=" << join(spec.node_effects) << "\n"
              << "b=" << spec.b << "\n"
              << "directed=" << (spec.directed ? 1 : 0) << "\n";
          write_covariates(spec.dyadic_covariates, path, out);
        } else if constexpr (std::is_same_v<T, NodeEffectFitSpec>) {
          out << "model=node_effect\n"
              << "c=" << spec.intercept << "\n"
              << "u=" << join(spec.node_effects) << "\n"
              << "d=" << spec.slope << "\n"
              << "directed=" << (spec.directed ? 1 : 0) << "\n"
              << "ridge_lambda=" << spec.ridge_lambda << "\n";
          write_covariates(spec.dyadic_covariates, path, out);
        } else {
          out << "model=edge_probs\n"
              << "directed=" << (spec.directed ? 1 : 0) << "\n";
          write_covariates(spec.probs, path, out);
        }
      },
      model);
}

}  // namespace entprop
