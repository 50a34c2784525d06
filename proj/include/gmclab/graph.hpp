#pragma once

#include <cstdint>
#include <vector>

#include "gmclab/errors.hpp"

namespace gmclab {

// Simple undirected graph on at most 64 vertices, adjacency as bitmasks.
class Graph {
 public:
  explicit Graph(int n);

  int size() const noexcept { return n_; }
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const noexcept { return (adj_[u] >> v) & 1u; }
  int degree(int v) const noexcept;
  std::uint64_t neighbours(int v) const noexcept { return adj_[v]; }

  static Graph path(int n);
  static Graph complete(int n);

 private:
  int n_;
  std::vector<std::uint64_t> adj_;
};

struct IndependenceStats {
  int alpha = 0;
  bool exact = false;
  double caro_wei = 0.0;          // sum 1/(d+1)
  double max_degree_bound = 0.0;  // N/(Delta+1)
  double avg_degree_bound = 0.0;  // N/(1+dbar)
};

// Branch and bound; exponential, intended for N <= 30.
int independence_number_exact(const Graph& g);
// Repeatedly take a minimum-degree vertex and drop its neighbours.
int independence_number_greedy(const Graph& g);

IndependenceStats independence_stats(const Graph& g);

}  // namespace gmclab
