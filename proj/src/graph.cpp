#include "gmclab/graph.hpp"

#include <algorithm>
#include <bit>

namespace gmclab {

Graph::Graph(int n) : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0)), 0) {
  if (n < 0 || n > 64) throw ValidationError("graph size must be in [0, 64]");
}

void Graph::add_edge(int u, int v) {
  if (u == v) throw ValidationError("self loops are not allowed");
  adj_[u] |= std::uint64_t{1} << v;
  adj_[v] |= std::uint64_t{1} << u;
}

int Graph::degree(int v) const noexcept { return std::popcount(adj_[v]); }

Graph Graph::path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

namespace {

void branch(const Graph& g, std::uint64_t candidates, int size, int& best) {
  if (candidates == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + std::popcount(candidates) <= best) return;
  // Branch on a vertex of maximum remaining degree: take it or drop it.
  int pick = -1, pick_deg = -1;
  for (std::uint64_t c = candidates; c; c &= c - 1) {
    const int v = std::countr_zero(c);
    const int d = std::popcount(g.neighbours(v) & candidates);
    if (d > pick_deg) {
      pick = v;
      pick_deg = d;
    }
  }
  const std::uint64_t bit = std::uint64_t{1} << pick;
  if (pick_deg == 0) {
    best = std::max(best, size + std::popcount(candidates));
    return;
  }
  branch(g, candidates & ~bit & ~g.neighbours(pick), size + 1, best);
  branch(g, candidates & ~bit, size, best);
}

}  // namespace

int independence_number_exact(const Graph& g) {
  const int n = g.size();
  if (n == 0) return 0;
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  int best = 0;
  branch(g, all, 0, best);
  return best;
}

int independence_number_greedy(const Graph& g) {
  const int n = g.size();
  std::uint64_t left = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  int size = 0;
  while (left) {
    int pick = -1, pick_deg = 65;
    for (std::uint64_t c = left; c; c &= c - 1) {
      const int v = std::countr_zero(c);
      const int d = std::popcount(g.neighbours(v) & left);
      if (d < pick_deg) {
        pick = v;
        pick_deg = d;
      }
    }
    left &= ~(std::uint64_t{1} << pick) & ~g.neighbours(pick);
    ++size;
  }
  return size;
}

IndependenceStats independence_stats(const Graph& g) {
  IndependenceStats s;
  const int n = g.size();
  s.exact = n <= 30;
  s.alpha = s.exact ? independence_number_exact(g) : independence_number_greedy(g);
  int max_deg = 0;
  long total_deg = 0;
  for (int v = 0; v < n; ++v) {
    const int d = g.degree(v);
    max_deg = std::max(max_deg, d);
    total_deg += d;
    s.caro_wei += 1.0 / (d + 1.0);
  }
  const double nd = static_cast<double>(n);
  s.max_degree_bound = n > 0 ? nd / (max_deg + 1.0) : 0.0;
  s.avg_degree_bound = n > 0 ? nd / (1.0 + static_cast<double>(total_deg) / nd) : 0.0;
  return s;
}

}  // namespace gmclab
