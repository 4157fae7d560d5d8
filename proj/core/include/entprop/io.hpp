// Flat key=value config files, CSV matrices, and network-model spec files.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "entprop/netmodel.hpp"

namespace entprop {

// key=value lines; '#' starts a comment; blank lines ignored.
using KeyValueMap = std::map<std::string, std::string, std::less<>>;

KeyValueMap read_key_values(std::istream& in);
std::vector<double> parse_double_list(const std::string& text, char sep = ',');

// Headerless CSV of doubles, one matrix row per line.
Eigen::MatrixXd read_csv_matrix(std::istream& in);
void write_csv_matrix(const Eigen::MatrixXd& m, std::ostream& out);

// Model spec files are flat key-value text; matrix-valued covariates live in
// a sidecar CSV referenced by a `covariates=<path>` key (relative paths
// resolve against the spec file's directory).
//
//   model=product_exp       intercept=, x=<comma list>
//   model=inner_product     a=, b=, tau=, covariates=<csv>          (N x d)
//   model=dyadic_logistic   a=<comma list>, b=, directed=, covariates=<csv>
//   model=node_effect       c=, u=<comma list>, d=, directed=, ridge_lambda=,
//                           covariates=<csv>
//   model=edge_probs        directed=, covariates=<csv>             (N x N)
NetworkModel read_model_spec(const std::string& path);
void write_model_spec(const NetworkModel& model, const std::string& path);

}  // namespace entprop
