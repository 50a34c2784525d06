#include "gmclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "experiments_common.hpp"

namespace gmclab {

using detail::fmt;

double ExperimentConfig::get(const std::string& key) const { return list(key).at(0); }

const std::vector<double>& ExperimentConfig::list(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end() || it->second.empty()) throw ConfigError("missing parameter '" + key + "' for " + name);
  return it->second;
}

void ExperimentConfig::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma * gamma >= 2.0) throw ValidationError("gamma² < 2 required");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("delta > 0 required");
  if (!(eps() > 0.0)) throw ValidationError("epsilon > 0 required");
  if (eps() > delta) throw ValidationError("epsilon <= delta required");
  if (!(spacing() > 0.0)) throw ValidationError("grid spacing h > 0 required");
  if (spacing() > eps() / 4.0 * (1.0 + 1e-12)) throw ValidationError("grid spacing h <= epsilon/4 required");
  if (replicas < 100) throw ValidationError("replicas >= 100 required");
  if (const auto it = params.find("lambda"); it != params.end())
    for (double l : it->second)
      if (!(l > 0.0 && l < 1.0)) throw ValidationError("lambda in (0,1) required");
}

void Verdict::add(std::string name, bool ok, std::string detail, double value) {
  checks.push_back({std::move(name), ok, std::move(detail), value});
  pass = pass && ok;
}

const Check* Verdict::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double lebesgue_rate_bound(double x, double delta_n, double gamma) {
  const double g2 = gamma * gamma;
  return 2.0 * x * delta_n * g2 / (1.0 - g2);
}

double inverse_moment_left_endpoint(double gamma) {
  const double c = 1.0 + 0.5 * gamma * gamma;
  return -c * c / (2.0 * gamma * gamma);
}

namespace detail {

Verdict begin(const ExperimentConfig& cfg, const std::string& name) {
  cfg.validate();
  Verdict v;
  v.experiment = name;
  v.claim = find_experiment(name).claim;
  v.replicas = cfg.replicas;
  v.seed = cfg.seed;
  return v;
}

}  // namespace detail

using detail::begin;
using detail::domain;
using detail::Realizer;

Verdict exp_delta_smp(const ExperimentConfig& cfg) {
  Verdict v = begin(cfg, "delta_smp");
  const double a = cfg.get("a"), t = cfg.get("t"), alpha = cfg.get("alpha");
  const auto perms = static_cast<std::size_t>(cfg.get("permutations"));
  std::vector<double> rs;
  for (double f : cfg.list("r_factors")) {
    if (f < 1.0) throw ConfigError("delta_smp needs r >= delta");
    rs.push_back(f * cfg.delta);
  }
  auto series = detail::make_series("delta_smp", {"r", "spearman", "p_value", "alpha", "reject", "replicas"});
  if (cfg.gamma == 0.0) {
    v.degenerate = true;
    v.add("degenerate", true, "gamma = 0: masses are deterministic, association undefined");
    v.series.push_back(std::move(series));
    return v;
  }

  const double rmax = *std::max_element(rs.begin(), rs.end());
  const Realizer field(FieldSpec::line(cfg.gamma, cfg.delta, cfg.eps()),
                       domain(cfg.spacing(), 2.0 * a + 4.0 * cfg.delta + rmax + t));
  std::vector<double> all_r = rs;
  all_r.push_back(0.0);  // contrast, reported only
  const std::size_t n = cfg.replicas;
  std::vector<double> q(n);
  std::vector<std::vector<double>> m(all_r.size(), std::vector<double>(n));
  parallel_for(n, [&](std::size_t i) {
    const GmcMeasure g = field.measure(cfg.seed, substream_id(i, 0));
    q[i] = invert(g, a);
    for (std::size_t k = 0; k < all_r.size(); ++k) {
      const double lo = q[i] + all_r[k];
      if (lo + t > g.end()) throw InsufficientMass("delta_smp domain too short for Q(a) + r + t");
      m[k][i] = mass(g, lo, lo + t);
    }
  });

  const double adj = alpha / static_cast<double>(rs.size());
  for (std::size_t k = 0; k < all_r.size(); ++k) {
    const bool contrast = k == rs.size();
    const TestReport rep = independence_test(q, m[k], perms, cfg.seed + k, contrast ? alpha : adj);
    const double rho = spearman(q, m[k]);
    series.rows.push_back({all_r[k], rho, rep.p_value, rep.alpha, std::int64_t{rep.reject}, std::int64_t(n)});
    if (contrast) continue;
    v.add(fmt("independence r=%g", all_r[k] / cfg.delta) + "delta", !rep.reject,
          fmt("spearman %.4f, permutation p %.4f vs alpha %.4g", rho, rep.p_value, adj), rep.p_value);
  }
  v.series.push_back(std::move(series));
  return v;
}

namespace {

// Layer-cake integral of P(eta(t) <= a < tilted_i(t)) for one realization.
double tilted_gap(const GmcMeasure& g, double a, const std::vector<double>& excess, double e0) {
  const std::size_t n = g.grid.count;
  const double h = g.grid.h;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = g.cumulative[i];
    if (c >= a) break;
    const double w = g.cell_mass(i);
    double s = 0.0;
    const std::size_t reach = std::min(i, excess.size() - 1);
    for (std::size_t lag = 1; lag <= reach; ++lag) s += g.cell_mass(i - lag) * excess[lag];
    const double f1 = w > 0.0 ? (a - c) / w : INFINITY;
    const double f2 = w > 0.0 ? (a - c - s) / (w * e0) : (c + s >= a ? -INFINITY : INFINITY);
    const double lo = std::max(0.0, f2), hi = std::min(1.0, f1);
    if (hi > lo) total += (hi - lo) * h;
  }
  return total;
}

}  // namespace

Verdict exp_nonlinear_expectation(const ExperimentConfig& cfg) {
  Verdict v = begin(cfg, "nonlinear_expectation");
  const double a = cfg.get("a");
  if (!(a > 0.0)) throw ConfigError("nonlinear_expectation needs a > 0");
  auto series = detail::make_series("nonlinear_expectation",
                                    {"gamma", "quantity", "mean", "std_error", "ci_low", "ci_high", "replicas"});
  const auto push = [&](double gamma, const char* what, const EstimateReport& r) {
    series.rows.push_back({gamma, std::string(what), r.mean, r.std_error, r.ci_low, r.ci_high,
                           std::int64_t(r.replicas)});
  };
  // Long enough that even the gamma = 1 comparison run carries mass a.
  const Grid grid = domain(cfg.spacing(), 2.0 * a + 12.0 * cfg.delta);

  if (cfg.gamma == 0.0) {
    v.degenerate = true;
    const Realizer field(FieldSpec::line(0.0, cfg.delta, cfg.eps()), grid);
    const double gap = invert(field.measure(cfg.seed, 0), a) - a;
    v.add("exact equality", std::abs(gap) <= 1e-12 * std::max(1.0, a), fmt("Q(a) - a = %.3g", gap), gap);
    push(0.0, "Q(a)-a", summarize(std::vector<double>(100, gap), cfg.seed));
    v.series.push_back(std::move(series));
    return v;
  }

  const auto run = [&](double gamma, std::size_t replicas, std::uint32_t component, bool tilt,
                       std::vector<double>& gaps, std::vector<double>& paired) {
    const FieldSpec spec = FieldSpec::line(gamma, cfg.delta, cfg.eps());
    const Realizer field(spec, grid);
    const CovarianceKernel k(spec);
    const double g2 = gamma * gamma;
    std::vector<double> excess;
    for (std::size_t lag = 0; static_cast<double>(lag) * grid.h < spec.delta; ++lag)
      excess.push_back(std::expm1(g2 * k(static_cast<double>(lag) * grid.h)));
    const double e0 = std::exp(g2 * k(0.0));
    gaps.assign(replicas, 0.0);
    paired.assign(tilt ? replicas : 0, 0.0);
    parallel_for(replicas, [&](std::size_t i) {
      const GmcMeasure g = field.measure(cfg.seed, substream_id(i, component));
      if (g.total() < a) throw InsufficientMass("nonlinear_expectation domain carries less than a");
      gaps[i] = invert(g, a) - a;
      if (tilt) paired[i] = gaps[i] - tilted_gap(g, a, excess, e0);
    });
  };

  std::vector<double> gaps, paired;
  run(cfg.gamma, cfg.replicas, 0, true, gaps, paired);
  const EstimateReport est = summarize(gaps, cfg.seed);
  const EstimateReport diff = summarize(paired, cfg.seed);
  push(cfg.gamma, "Q(a)-a", est);
  push(cfg.gamma, "Q(a)-a-layercake", diff);
  v.add("strictly positive", est.ci_low > 0.0, fmt("E[Q(a)] - a = %.5g, CI [%.5g, %.5g]", est.mean, est.ci_low,
                                                   est.ci_high),
        est.ci_low);
  const double z = diff.std_error > 0.0 ? std::abs(diff.mean) / diff.std_error : 0.0;
  v.add("layer-cake identity", z <= 5.0, fmt("paired difference %.3g (%.2f SE)", diff.mean, z), z);

  // Comparative runs, reported only.
  const auto cmp_n = static_cast<std::size_t>(cfg.get("compare_replicas"));
  std::uint32_t comp = 1;
  for (double g : cfg.list("compare_gammas")) {
    if (g * g >= 2.0 || g < 0.0) throw ValidationError("gamma² < 2 required");
    run(g, cmp_n, comp++, false, gaps, paired);
    push(g, "Q(a)-a", summarize(gaps, cfg.seed));
  }
  v.series.push_back(std::move(series));
  return v;
}

Verdict exp_ergodic(const ExperimentConfig& cfg) {
  Verdict v = begin(cfg, "ergodic");
  const double x = cfg.get("x"), threshold = cfg.get("threshold");
  const std::vector<double>& ts = cfg.list("T");
  if (!std::is_sorted(ts.begin(), ts.end())) throw ConfigError("ergodic T grid must be increasing");
  const double tmax = ts.back();
  const Realizer field(FieldSpec::line(cfg.gamma, cfg.delta, cfg.eps()),
                       domain(cfg.spacing(), 2.0 * tmax * x + 4.0 * cfg.delta));
  const std::size_t n = cfg.replicas;
  std::vector<std::vector<double>> dev(ts.size(), std::vector<double>(n));
  parallel_for(n, [&](std::size_t i) {
    const GmcMeasure g = field.measure(cfg.seed, substream_id(i, 0));
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double q = detail::invert_or_inf(g, ts[k] * x);
      if (!std::isfinite(q)) throw InsufficientMass("ergodic domain carries less than T x");
      dev[k][i] = std::abs(q / ts[k] - x);
    }
  });
  auto series = detail::make_series("ergodic", {"T", "mean_abs_dev", "std_error", "ci_low", "ci_high", "replicas"});
  std::vector<EstimateReport> est;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    est.push_back(summarize(dev[k], cfg.seed));
    const auto& e = est.back();
    series.rows.push_back({ts[k], e.mean, e.std_error, e.ci_low, e.ci_high, std::int64_t(n)});
  }
  v.series.push_back(std::move(series));

  if (cfg.gamma == 0.0) {
    v.degenerate = true;
    double worst = 0.0;
    for (const auto& e : est) worst = std::max(worst, e.mean);
    v.add("exact limit", worst <= 1e-12, fmt("max |Q(Tx)/T - x| = %.3g", worst), worst);
    return v;
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < est.size(); ++k) decreasing = decreasing && est[k].mean < est[k - 1].mean;
  v.add("deviation decreasing in T", decreasing, fmt("means from %.4g to %.4g", est.front().mean, est.back().mean));
  v.add("largest T below threshold", est.back().ci_high < threshold,
        fmt("T=%g: CI high %.4g vs %.4g", tmax, est.back().ci_high, threshold), est.back().ci_high);
  return v;
}

Verdict exp_lebesgue_rate(const ExperimentConfig& cfg) {
  if (cfg.gamma >= 1.0) throw ConfigError("lebesgue_rate needs gamma < 1");
  Verdict v = begin(cfg, "lebesgue_rate");
  const double x = cfg.get("x"), factor = cfg.get("bound_factor");
  auto series =
      detail::make_series("lebesgue_rate", {"delta_n", "bound", "mean", "std_error", "ci_low", "ci_high", "replicas"});
  const double eps_ratio = cfg.eps() / cfg.delta, h_ratio = cfg.spacing() / cfg.delta;
  std::uint32_t comp = 0;
  std::vector<double> means;
  for (double dn : cfg.list("delta_n")) {
    if (!(x > dn)) throw ConfigError("lebesgue_rate needs x > delta_n");
    const Realizer field(FieldSpec::line(cfg.gamma, dn, dn * eps_ratio), domain(dn * h_ratio, x));
    const std::uint32_t c = comp++;
    const auto sq = detail::collect(cfg.replicas, [&](std::size_t i) {
      const double d = mass(field.measure(cfg.seed, substream_id(i, c)), 0.0, x) - x;
      return d * d;
    });
    const EstimateReport e = summarize(sq, cfg.seed);
    const double bound = lebesgue_rate_bound(x, dn, cfg.gamma) * factor;
    series.rows.push_back({dn, bound, e.mean, e.std_error, e.ci_low, e.ci_high, std::int64_t(cfg.replicas)});
    means.push_back(e.mean);
    if (cfg.gamma == 0.0) {
      v.degenerate = true;
      v.add(fmt("delta_n=%g exact", dn), e.mean <= 1e-24 * x * x, fmt("mean squared deviation %.3g", e.mean),
            e.mean);
    } else {
      v.add(fmt("delta_n=%g below bound", dn), e.ci_high <= bound,
            fmt("CI high %.5g vs bound %.5g", e.ci_high, bound), e.ci_high);
    }
  }
  v.series.push_back(std::move(series));
  return v;
}

Verdict exp_cauchy_rate(const ExperimentConfig& cfg) {
  Verdict v = begin(cfg, "cauchy_rate");
  const double x = cfg.get("x"), ell = cfg.get("ell"), ell_ref = cfg.get("ell_ref");
  std::vector<int> levels;
  for (double n : cfg.list("n")) levels.push_back(static_cast<int>(n));
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (levels[k] != levels[k - 1] + 1) throw ConfigError("cauchy_rate levels must be consecutive");
  if (levels.size() < 3) throw ConfigError("cauchy_rate needs at least three levels");
  const auto eps_n = [&](int n) { return cfg.delta * std::ldexp(1.0, -n); };
  const int n0 = levels.front(), n1 = levels.back() + 1;
  const double h = std::min(cfg.spacing(), eps_n(n1) / 4.0);
  const Grid grid = domain(h, 2.0 * x + 4.0 * cfg.delta);

  const Realizer coarse(FieldSpec::line(cfg.gamma, cfg.delta, eps_n(n0)), grid);
  std::vector<Realizer> strips;
  for (int n = n0; n < n1; ++n) strips.emplace_back(FieldSpec::line(cfg.gamma, eps_n(n), eps_n(n + 1)), grid);

  const std::size_t reps = cfg.replicas, nl = levels.size();
  std::vector<std::vector<double>> d(nl, std::vector<double>(reps)), d_ref(nl, std::vector<double>(reps));
  parallel_for(reps, [&](std::size_t i) {
    std::vector<double> u, strip;
    coarse.field(cfg.seed, substream_id(i, 0), u);
    double q_prev = invert(build_measure(grid, u, coarse.spec()), x);
    for (std::size_t k = 0; k < nl; ++k) {
      strips[k].field(cfg.seed, substream_id(i, static_cast<std::uint32_t>(k + 1)), strip);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += strip[j];
      const double q = invert(build_measure(grid, u, FieldSpec::line(cfg.gamma, cfg.delta, eps_n(n0 + int(k) + 1))), x);
      const double diff = std::abs(q - q_prev);
      d[k][i] = std::pow(diff, ell);
      d_ref[k][i] = std::pow(diff, ell_ref);
      q_prev = q;
    }
  });

  auto series = detail::make_series("cauchy_rate", {"n", "ell", "mean", "std_error", "ci_low", "ci_high", "replicas"});
  std::vector<double> ns, logs, means;
  for (std::size_t k = 0; k < nl; ++k) {
    const EstimateReport e = summarize(d[k], cfg.seed), r = summarize(d_ref[k], cfg.seed);
    series.rows.push_back({std::int64_t(levels[k]), ell, e.mean, e.std_error, e.ci_low, e.ci_high, std::int64_t(reps)});
    series.rows.push_back({std::int64_t(levels[k]), ell_ref, r.mean, r.std_error, r.ci_low, r.ci_high, std::int64_t(reps)});
    ns.push_back(levels[k]);
    means.push_back(e.mean);
    logs.push_back(std::log(e.mean));
  }
  v.series.push_back(std::move(series));

  if (cfg.gamma == 0.0) {
    v.degenerate = true;
    const double worst = *std::max_element(means.begin(), means.end());
    v.add("identical inverses", worst <= 1e-15, fmt("max mean difference %.3g", worst), worst);
    return v;
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < means.size(); ++k) decreasing = decreasing && means[k] < means[k - 1];
  v.add("strictly decreasing", decreasing, fmt("means from %.4g to %.4g", means.front(), means.back()));
  const SlopeFit fit = slope_fit(ns, logs);
  const double upper = fit.slope + 1.96 * fit.slope_se;
  v.add("geometric decay", upper < 0.0, fmt("log-mean slope %.4f +- %.4f", fit.slope, 1.96 * fit.slope_se), upper);
  return v;
}

Verdict exp_inverse_moments(const ExperimentConfig& cfg) {
  Verdict v = begin(cfg, "inverse_moments");
  const double x = cfg.get("x"), margin = cfg.get("margin"), tol = cfg.get("tolerance");
  const double endpoint = cfg.gamma > 0.0 ? inverse_moment_left_endpoint(cfg.gamma)
                                          : -std::numeric_limits<double>::infinity();
  const std::vector<double>& ps = cfg.list("p");
  for (double p : ps)
    if (!(p > (1.0 - margin) * endpoint)) throw ConfigError(fmt("p = %g is not inside the moment window by the margin", p));

  const Realizer field(FieldSpec::line(cfg.gamma, cfg.delta, cfg.eps()),
                       domain(cfg.spacing(), 2.0 * x + 4.0 * cfg.delta));
  const std::size_t n = 2 * cfg.replicas;
  const auto q = detail::collect(n, [&](std::size_t i) {
    const double r = detail::invert_or_inf(field.measure(cfg.seed, substream_id(i, 0)), x);
    if (!std::isfinite(r)) throw InsufficientMass("inverse_moments domain carries less than x");
    return r;
  });

  auto series = detail::make_series("inverse_moments", {"p", "endpoint", "mean_half", "mean", "std_error", "ci_low",
                                                         "ci_high", "relative_change", "replicas"});
  for (double p : ps) {
    std::vector<double> qp(n);
    for (std::size_t i = 0; i < n; ++i) qp[i] = std::pow(q[i], p);
    const EstimateReport half = summarize(std::span<const double>(qp).first(cfg.replicas), cfg.seed);
    const EstimateReport full = summarize(qp, cfg.seed);
    const double rel = std::abs(full.mean - half.mean) / std::abs(full.mean);
    series.rows.push_back({p, endpoint, half.mean, full.mean, full.std_error, full.ci_low, full.ci_high, rel,
                           std::int64_t(n)});
    if (cfg.gamma == 0.0) {
      v.degenerate = true;
      const double exact = std::pow(x, p);
      const double err = std::abs(full.mean - exact) / exact;
      v.add(fmt("p=%g exact", p), err <= 1e-12, fmt("relative error %.3g", err), err);
      continue;
    }
    v.add(fmt("p=%g finite and stable", p), std::isfinite(full.mean) && full.mean > 0.0 && rel < tol,
          fmt("E[Q^p] = %.5g, doubling change %.3g", full.mean, rel), rel);
  }
  v.series.push_back(std::move(series));
  return v;
}

namespace {

ExperimentConfig defaults(std::string name, double gamma, double delta, std::size_t replicas,
                          std::map<std::string, std::vector<double>> params) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.gamma = gamma;
  c.delta = delta;
  c.replicas = replicas;
  c.seed = 20240521;
  c.params = std::move(params);
  return c;
}

std::vector<ExperimentInfo> build_registry() {
  std::vector<ExperimentInfo> r;
  r.push_back({"delta_smp",
               "Mass collected in a window starting at least delta past the hitting time Q(a) is independent of Q(a).",
               defaults("delta_smp", 0.5, 0.25, 2000,
                        {{"a", {0.3}}, {"t", {0.1}}, {"r_factors", {1.0, 2.0}}, {"permutations", {999}},
                         {"alpha", {0.01}}}),
               exp_delta_smp});
  r.push_back({"nonlinear_expectation",
               "The inverse overshoots on average: E[Q(a)] - a > 0, equal to a layer-cake integral over the tilted measure.",
               defaults("nonlinear_expectation", 0.8, 1.0, 10000,
                        {{"a", {0.5}}, {"compare_gammas", {1.0, 0.3}}, {"compare_replicas", {2000}}}),
               exp_nonlinear_expectation});
  r.push_back({"inverse_scaling",
               "Q at truncation delta equals delta times the unit-scale inverse at x/delta in law, and the exact "
               "cone field obeys the lognormal mass and inverse scaling laws.",
               defaults("inverse_scaling", 0.5, 0.5, 2000,
                        {{"x", {0.25}}, {"lambda", {0.5}}, {"window_x", {0.1}}, {"window_t", {0.05}},
                         {"alpha", {0.01}}}),
               exp_inverse_scaling});
  r.push_back({"ergodic", "Q(Tx)/T converges to x as T grows.",
               defaults("ergodic", 0.5, 1.0, 500, {{"x", {1.0}}, {"T", {8, 16, 32, 64, 128}}, {"threshold", {0.05}}}),
               exp_ergodic});
  r.push_back({"lebesgue_rate",
               "For gamma < 1 the squared deviation of the delta_n-truncated mass of [0,x] from x is at most "
               "2 x delta_n gamma^2/(1 - gamma^2).",
               defaults("lebesgue_rate", 0.5, 1.0, 1000,
                        {{"x", {1.0}}, {"delta_n", {0.0625, 0.015625}}, {"bound_factor", {1.0}}}),
               exp_lebesgue_rate});
  r.push_back({"cauchy_rate",
               "Inverses at successive lower cutoffs form a Cauchy sequence: E|Q_{n+1}(x) - Q_n(x)|^l decays "
               "geometrically in n.",
               defaults("cauchy_rate", 0.5, 1.0, 500,
                        {{"x", {0.5}}, {"n", {3, 4, 5, 6, 7}}, {"ell", {1.5}}, {"ell_ref", {1.0}}}),
               exp_cauchy_rate});
  r.push_back({"inverse_moments",
               "Q(0,x) has finite moments for every p above -(1 + gamma^2/2)^2/(2 gamma^2).",
               defaults("inverse_moments", 0.5, 1.0, 1000,
                        {{"x", {0.5}}, {"p", {-1.0, -0.5, 0.5, 1.0, 2.0, 3.0}}, {"margin", {0.2}},
                         {"tolerance", {0.1}}}),
               exp_inverse_moments});
  {
    ExperimentConfig c = defaults("ratio_and_dilatation", 0.5, 1.0, 1000,
                                  {{"x", {0.015625, 0.03125, 0.0625, 0.125}}, {"a", {0.25}}, {"c", {2.0}},
                                   {"p", {1.0}}, {"slope_limit", {0.5}}, {"last_fraction", {0.05}}});
    c.epsilon = 1.0 / 1024.0;
    c.h = 1.0 / 4096.0;
    r.push_back({"ratio_and_dilatation",
                 "Moments of increment ratios of Q over equal-length intervals grow at most like a small power of "
                 "x/delta, and the Whitney-square bound on the dilatation of the inverse has a finite integral.",
                 c, exp_ratio_and_dilatation});
  }
  r.push_back({"decoupling",
               "Gap graphs built from overlap events across scales have independence number below c_gap N with a "
               "probability that does not grow with N, and overlaps become rarer as scales separate.",
               defaults("decoupling", 0.5, 1.0, 500,
                        {{"N", {6, 9, 12}}, {"c_gap", {0.5}}, {"rho", {0.5}}, {"r_a", {0.25}}, {"r_b", {0.75}}}),
               exp_decoupling});
  r.push_back({"multipoint_sanity",
               "Products of increment ratios over several scales, gated on the gap event, have finite positive "
               "means comparable to the product of single-scale means.",
               defaults("multipoint_sanity", 0.5, 1.0, 1000,
                        {{"S", {3}}, {"x", {0.0625}}, {"c", {2.0}}, {"p", {1.0}}, {"factor", {3.0}}, {"rho", {0.5}},
                         {"r_a", {0.25}}, {"r_b", {0.75}}}),
               exp_multipoint_sanity});
  return r;
}

}  // namespace

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> r = build_registry();
  return r;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace gmclab
