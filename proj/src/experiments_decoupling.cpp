#include <algorithm>
#include <cmath>
#include <utility>

#include "experiments_common.hpp"

namespace gmclab {

using detail::domain;
using detail::fmt;
using detail::Realizer;

Graph build_gap_graph(const std::vector<GapScale>& scales) {
  const int n = static_cast<int>(scales.size());
  if (n < 2) throw ConfigError("gap graph needs at least two scales");
  Graph g(n);
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m)
      if (scales[k].q_a - scales[m].q_b <= scales[m].delta_k) g.add_edge(k, m);
  return g;
}

namespace {

GapParameters gap_parameters(const ExperimentConfig& cfg) {
  GapParameters p;
  p.rho = cfg.get("rho");
  if (!(p.rho > 0.0 && p.rho < 1.0)) throw ConfigError("rho must lie in (0,1)");
  p.rho_a = std::pow(p.rho, cfg.get("r_a"));
  p.rho_b = std::pow(p.rho, cfg.get("r_b"));
  return p;
}

using i128 = __int128;

// The lower bounds compared in exact rational arithmetic with the common
// denominator lcm(1..N).
struct BoundAudit {
  bool exact_ge_greedy = true;
  bool greedy_ge_caro_wei = true;
  bool caro_wei_ge_average = true;
  bool average_ge_max_degree = true;
  bool ok() const { return exact_ge_greedy && greedy_ge_caro_wei && caro_wei_ge_average && average_ge_max_degree; }
};

BoundAudit audit(const Graph& g, int alpha_exact, int alpha_greedy) {
  const int n = g.size();
  i128 l = 1;
  for (int d = 2; d <= n; ++d) {
    i128 x = l, y = d;
    while (y != 0) x = std::exchange(y, x % y);
    l = l / x * d;
  }
  i128 cw = 0;
  long long sum_deg = 0;
  int max_deg = 0;
  for (int v = 0; v < n; ++v) {
    const int d = g.degree(v);
    cw += l / (d + 1);
    sum_deg += d;
    max_deg = std::max(max_deg, d);
  }
  const i128 nn = n;
  BoundAudit a;
  a.exact_ge_greedy = alpha_exact >= alpha_greedy;
  a.greedy_ge_caro_wei = i128(alpha_greedy) * l >= cw;
  a.caro_wei_ge_average = cw * (nn + sum_deg) >= nn * nn * l;            // sum 1/(d+1) >= N/(1+dbar)
  a.average_ge_max_degree = nn * (max_deg + 1) >= nn + sum_deg;          // N/(1+dbar) >= N/(1+Delta)
  return a;
}

struct UnitPath {
  double q_a = 0.0, q_b = 0.0;
  double ratio = 1.0;  // (Q(J)/Q(I))^p, multipoint only
};

}  // namespace

Verdict exp_decoupling(const ExperimentConfig& cfg) {
  Verdict v = detail::begin(cfg, "decoupling");
  const GapParameters gp = gap_parameters(cfg);
  const double c_gap = cfg.get("c_gap");
  std::vector<int> sizes;
  for (double nv : cfg.list("N")) sizes.push_back(static_cast<int>(nv));
  for (int nv : sizes)
    if (nv < 2 || nv > 64) throw ConfigError("decoupling needs 2 <= N <= 64");
  const double delta = cfg.delta;
  const Realizer field(FieldSpec::line(cfg.gamma, delta, cfg.eps()),
                       domain(cfg.spacing(), 2.0 * gp.rho_a * delta + 4.0 * delta));
  const std::size_t reps = cfg.replicas;

  auto summary = detail::make_series("decoupling", {"N", "p_alpha_small", "count", "mean_alpha", "mean_caro_wei",
                                                    "mean_edges", "replicas"});
  const int nmax = *std::max_element(sizes.begin(), sizes.end());
  std::vector<std::size_t> overlap(nmax, 0);  // O_{0,m} counts on the largest graphs
  std::size_t violations = 0, graphs = 0;
  std::vector<double> freq;

  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const int nv = sizes[s];
    std::vector<int> alpha(reps), greedy(reps), edges(reps);
    std::vector<double> cw(reps);
    std::vector<char> bad(reps, 0);
    std::vector<std::uint64_t> first_row(reps);
    parallel_for(reps, [&](std::size_t i) {
      std::vector<GapScale> scales(nv);
      for (int k = 0; k < nv; ++k) {
        const auto comp = static_cast<std::uint32_t>(s * 64 + k);
        const GmcMeasure g = field.measure(cfg.seed, substream_id(i, comp));
        const double scale = std::pow(gp.rho, k);
        scales[k] = {delta * scale, scale * invert(g, gp.rho_a * delta), scale * invert(g, gp.rho_b * delta)};
      }
      const Graph graph = build_gap_graph(scales);
      const IndependenceStats st = independence_stats(graph);
      alpha[i] = st.alpha;
      greedy[i] = independence_number_greedy(graph);
      cw[i] = st.caro_wei;
      int e = 0;
      for (int k = 0; k < nv; ++k) e += graph.degree(k);
      edges[i] = e / 2;
      bad[i] = !audit(graph, st.alpha, greedy[i]).ok();
      first_row[i] = graph.neighbours(0);
    });
    std::size_t small = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      small += alpha[i] < c_gap * nv;
      violations += bad[i];
      ++graphs;
      if (nv == nmax)
        for (int m = 1; m < nv; ++m) overlap[m] += (first_row[i] >> m) & 1u;
    }
    const auto mean_of = [&](const auto& xs) {
      double t = 0.0;
      for (auto x : xs) t += double(x);
      return t / double(reps);
    };
    freq.push_back(double(small) / double(reps));
    summary.rows.push_back({std::int64_t(nv), freq.back(), std::int64_t(small), mean_of(alpha), mean_of(cw),
                            mean_of(edges), std::int64_t(reps)});

    if (cfg.gamma == 0.0) {
      // Deterministic graph from the parameters alone.
      std::vector<GapScale> scales(nv);
      for (int k = 0; k < nv; ++k) {
        const double scale = std::pow(gp.rho, k);
        scales[k] = {delta * scale, gp.rho_a * delta * scale, gp.rho_b * delta * scale};
      }
      const int a0 = independence_stats(build_gap_graph(scales)).alpha;
      const double expected = a0 < c_gap * nv ? 1.0 : 0.0;
      v.degenerate = true;
      v.add(fmt("N=%d closed form", nv), freq.back() == expected,
            fmt("P(alpha < c N) = %g, closed form %g", freq.back(), expected), freq.back());
    }
  }

  v.add("bound ordering", violations == 0, fmt("%zu violations on %zu graphs", violations, graphs), double(violations));
  if (cfg.gamma != 0.0) {
    bool nonincreasing = true;
    for (std::size_t s = 1; s < freq.size(); ++s) nonincreasing = nonincreasing && freq[s] <= freq[s - 1];
    v.add("P(alpha < c N) nonincreasing", nonincreasing,
          fmt("from %.4f at N=%d to %.4f at N=%d", freq.front(), sizes.front(), freq.back(), sizes.back()), freq.back());
    if (sizes.size() >= 2) {
      std::vector<double> xs, ys;
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        xs.push_back(sizes[s]);
        ys.push_back(std::log((freq[s] * double(reps) + 0.5) / (double(reps) + 1.0)));
      }
      const double slope = slope_fit(xs, ys).slope;
      v.add("log-frequency slope", slope <= 0.0, fmt("slope %.4g", slope), slope);
    }
  }

  auto pairs = detail::make_series("decoupling_overlap", {"k", "m", "frequency", "count", "replicas"});
  bool decreasing = true;
  for (int m = 1; m < nmax; ++m) {
    const double f = double(overlap[m]) / double(reps);
    pairs.rows.push_back({std::int64_t(0), std::int64_t(m), f, std::int64_t(overlap[m]), std::int64_t(reps)});
    if (m > 1) {
      const std::size_t prev = overlap[m - 1];
      decreasing = decreasing && (prev > 0 ? overlap[m] < prev : overlap[m] == 0);
    }
  }
  v.add("overlap decreasing in m", decreasing,
        fmt("P(O_{0,1}) = %.4f, P(O_{0,2}) = %.4f", double(overlap[1]) / double(reps),
            nmax > 2 ? double(overlap[2]) / double(reps) : 0.0));
  v.series.push_back(std::move(summary));
  v.series.push_back(std::move(pairs));
  return v;
}

Verdict exp_multipoint_sanity(const ExperimentConfig& cfg) {
  Verdict v = detail::begin(cfg, "multipoint_sanity");
  const GapParameters gp = gap_parameters(cfg);
  const int size = static_cast<int>(cfg.get("S"));
  const double x = cfg.get("x"), c = cfg.get("c"), p = cfg.get("p"), factor = cfg.get("factor");
  if (size < 1 || size > 3) throw ConfigError("multipoint_sanity needs 1 <= |S| <= 3");
  if (!(c > 1.0) || !(x > 0.0 && x < 1.0)) throw ConfigError("multipoint_sanity needs c > 1 and 0 < x < 1");
  const double delta = cfg.delta;
  const double a = gp.rho_a * delta, xl = x * delta, b = a + c * xl;
  const Realizer field(FieldSpec::line(cfg.gamma, delta, cfg.eps()), domain(cfg.spacing(), 2.0 * (b + xl) + 4.0 * delta));
  const std::size_t reps = cfg.replicas;

  // Scale k is the unit path shrunk by rho^k; ratios are scale free.
  std::vector<std::vector<double>> single(size, std::vector<double>(reps)), gated(size, std::vector<double>(reps));
  parallel_for(reps, [&](std::size_t i) {
    std::vector<UnitPath> path(size);
    for (int k = 0; k < size; ++k) {
      const GmcMeasure g = field.measure(cfg.seed, substream_id(i, static_cast<std::uint32_t>(k)));
      const double qj = invert(g, a + xl) - invert(g, a), qi = invert(g, b + xl) - invert(g, b);
      path[k] = {invert(g, a), invert(g, gp.rho_b * delta), std::pow(qj / qi, p)};
      single[k][i] = path[k].ratio;
    }
    for (int s = 1; s <= size; ++s) {
      std::vector<GapScale> scales(s);
      double product = 1.0;
      for (int k = 0; k < s; ++k) {
        const double r = std::pow(gp.rho, k);
        scales[k] = {delta * r, r * path[k].q_a, r * path[k].q_b};
        product *= path[k].ratio;
      }
      bool gap = true;
      if (s >= 2) {
        const Graph g = build_gap_graph(scales);
        for (int k = 0; k < s; ++k) gap = gap && g.degree(k) == 0;
      }
      gated[s - 1][i] = gap ? product : 0.0;
    }
  });

  auto series = detail::make_series("multipoint_sanity",
                                    {"S", "gated_mean", "std_error", "ci_low", "ci_high", "product_of_singles", "replicas"});
  std::vector<double> singles;
  for (int k = 0; k < size; ++k) singles.push_back(summarize(single[k], cfg.seed).mean);
  double product_single = 1.0;
  for (int s = 1; s <= size; ++s) {
    product_single *= singles[s - 1];
    const EstimateReport e = summarize(gated[s - 1], cfg.seed);
    series.rows.push_back({std::int64_t(s), e.mean, e.std_error, e.ci_low, e.ci_high, product_single, std::int64_t(reps)});
    if (cfg.gamma == 0.0) {
      v.degenerate = true;
      double worst = 0.0;
      for (double g : gated[s - 1]) worst = std::max(worst, g == 0.0 ? 0.0 : std::abs(g - 1.0));
      v.add(fmt("|S|=%d unit product", s), worst <= 1e-9, fmt("largest deviation from 1: %.3g", worst), worst);
      continue;
    }
    v.add(fmt("|S|=%d finite and comparable", s),
          std::isfinite(e.mean) && e.mean > 0.0 && e.mean <= factor * product_single,
          fmt("gated mean %.5g vs %.5g x product %.5g", e.mean, factor, product_single), e.mean / product_single);
    if (s == 1) {
      const double err = std::abs(e.mean - singles[0]) / singles[0];
      v.add("|S|=1 matches single ratio", err <= 1e-12, fmt("relative difference %.3g", err), err);
    }
  }
  v.series.push_back(std::move(series));
  return v;
}

}  // namespace gmclab
