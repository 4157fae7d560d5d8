// Binary network over N units, dense adjacency. Directed graphs store all
// ordered pairs; undirected graphs keep the full symmetric matrix and every
// mutation writes both triangles. Graphs are treated as immutable once built,
// so they can be shared freely across parallel replications.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace entprop {

class Graph {
 public:
  explicit Graph(int n, bool directed = false);

  int size() const { return n_; }
  bool directed() const { return directed_; }

  bool has_edge(int i, int j) const {
    check_pair(i, j);
    return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
  }

  // No self-loops; undirected insertion sets both (i,j) and (j,i).
  void add_edge(int i, int j);

  // Row sum: out-degree for directed graphs.
  int degree(int i) const;

  // Number of arcs (directed) or unordered edges (undirected).
  long edge_count() const;

  bool is_supergraph_of(const Graph& other) const;

  bool operator==(const Graph& other) const = default;

 private:
  void check_pair(int i, int j) const;

  int n_;
  bool directed_;
  std::vector<std::uint8_t> adj_;
};

// New edges only (present in g_plus, absent in g_minus). Throws
// SupergraphViolation if g_plus dropped an edge of g_minus.
Graph edge_diff(const Graph& g_minus, const Graph& g_plus);

// Edge-list text format: header line "n <N> directed <0|1>", then one
// 0-indexed "i j" pair per line.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace entprop
