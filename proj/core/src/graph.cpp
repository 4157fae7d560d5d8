#include "entprop/graph.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "entprop/errors.hpp"

namespace entprop {

Graph::Graph(int n, bool directed) : n_(n), directed_(directed) {
  if (n <= 0) {
    throw std::invalid_argument("Graph: unit count must be positive");
  }
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
}

void Graph::check_pair(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::invalid_argument("Graph: unit index out of range");
  }
}

void Graph::add_edge(int i, int j) {
  check_pair(i, j);
  if (i == j) {
    throw std::invalid_argument("Graph: self-loops are not allowed");
  }
  adj_[static_cast<std::size_t>(i) * n_ + j] = 1;
  if (!directed_) {
    adj_[static_cast<std::size_t>(j) * n_ + i] = 1;
  }
}

int Graph::degree(int i) const {
  if (i < 0 || i >= n_) {
    throw std::invalid_argument("Graph: unit index out of range");
  }
  int d = 0;
  const std::uint8_t* row = adj_.data() + static_cast<std::size_t>(i) * n_;
  for (int j = 0; j < n_; ++j) d += row[j];
  return d;
}

long Graph::edge_count() const {
  long total = 0;
  for (std::uint8_t v : adj_) total += v;
  return directed_ ? total : total / 2;
}

bool Graph::is_supergraph_of(const Graph& other) const {
  if (n_ != other.n_ || directed_ != other.directed_) return false;
  for (std::size_t idx = 0; idx < adj_.size(); ++idx) {
    if (other.adj_[idx] && !adj_[idx]) return false;
  }
  return true;
}

Graph edge_diff(const Graph& g_minus, const Graph& g_plus) {
  if (g_minus.size() != g_plus.size() || g_minus.directed() != g_plus.directed()) {
    throw std::invalid_argument("edge_diff: graphs differ in size or directedness");
  }
  if (!g_plus.is_supergraph_of(g_minus)) {
    throw SupergraphViolation("edge_diff: later graph dropped an existing edge");
  }
  const int n = g_minus.size();
  Graph diff(n, g_minus.directed());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && g_plus.has_edge(i, j) && !g_minus.has_edge(i, j)) {
        diff.add_edge(i, j);
      }
    }
  }
  return diff;
}

Graph read_edge_list(std::istream& in) {
  std::string word;
  int n = 0;
  int directed_flag = 0;
  if (!(in >> word) || word != "n" || !(in >> n) || !(in >> word) ||
      word != "directed" || !(in >> directed_flag)) {
    throw std::invalid_argument("read_edge_list: bad header, expected 'n <N> directed <0|1>'");
  }
  Graph g(n, directed_flag != 0);
  int i = 0, j = 0;
  while (in >> i >> j) {
    g.add_edge(i, j);
  }
  return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.size() << " directed " << (g.directed() ? 1 : 0) << "\n";
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = g.directed() ? 0 : i + 1; j < n; ++j) {
      if (i != j && g.has_edge(i, j)) {
        out << i << " " << j << "\n";
      }
    }
  }
}

}  // namespace entprop
