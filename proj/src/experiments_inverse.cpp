#include <algorithm>
#include <cmath>

#include "experiments_common.hpp"

namespace gmclab {

using detail::domain;
using detail::fmt;
using detail::Realizer;

namespace {

// Two-sided p-value for equal proportions k1/n1 and k2/n2.
double proportion_p(std::size_t k1, std::size_t n1, std::size_t k2, std::size_t n2) {
  const double p1 = double(k1) / double(n1), p2 = double(k2) / double(n2);
  const double pool = double(k1 + k2) / double(n1 + n2);
  const double se = std::sqrt(pool * (1.0 - pool) * (1.0 / double(n1) + 1.0 / double(n2)));
  if (se == 0.0) return 1.0;
  return std::erfc(std::abs(p1 - p2) / se / std::sqrt(2.0));
}

}  // namespace

Verdict exp_inverse_scaling(const ExperimentConfig& cfg) {
  Verdict v = detail::begin(cfg, "inverse_scaling");
  const double x = cfg.get("x"), lambda = cfg.get("lambda"), alpha = cfg.get("alpha");
  const double wx = cfg.get("window_x"), wt = cfg.get("window_t");
  const double delta = cfg.delta, eps = cfg.eps(), h = cfg.spacing();
  const std::size_t n = cfg.replicas;
  constexpr double kTests = 4.0;  // three KS tests and one proportion test
  const double adj = alpha / kTests;

  auto tests = detail::make_series("inverse_scaling", {"test", "statistic", "p_value", "alpha", "n1", "n2"});
  // At gamma = 0 both sides are the same constant up to rounding, which a
  // KS test would read as disjoint; compare the sorted samples instead.
  const auto record = [&](const std::string& name, std::vector<double> lhs, std::vector<double> rhs) {
    if (cfg.gamma == 0.0) {
      v.degenerate = true;
      std::sort(lhs.begin(), lhs.end());
      std::sort(rhs.begin(), rhs.end());
      double worst = lhs.size() == rhs.size() ? 0.0 : INFINITY;
      for (std::size_t i = 0; i < std::min(lhs.size(), rhs.size()); ++i)
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]) / std::max(1.0, std::abs(lhs[i])));
      v.add(name, worst <= 1e-12, fmt("gamma = 0: largest relative gap %.3g", worst), worst);
      return;
    }
    const TestReport r = ks_two_sample(lhs, rhs, adj);
    tests.rows.push_back({name, r.statistic, r.p_value, r.alpha, std::int64_t(r.n1), std::int64_t(r.n2)});
    v.add(name, !r.reject, fmt("KS D %.4f, p %.4f vs alpha %.4g", r.statistic, r.p_value, r.alpha), r.p_value);
  };

  // Scaling relation. The unit field on the scaled grid is the same Gaussian
  // vector up to the coordinate change, so the two laws coincide exactly.
  {
    const Realizer scaled(FieldSpec::line(cfg.gamma, delta, eps), domain(h, 2.0 * x + 4.0 * delta));
    const Realizer unit(FieldSpec::line(cfg.gamma, 1.0, eps / delta), domain(h / delta, 2.0 * x / delta + 4.0));
    // At delta = 1 both sides are literally the same draw.
    const std::uint32_t unit_component = delta == 1.0 ? 0 : 1;
    const auto lhs = detail::collect(n, [&](std::size_t i) {
      return invert(scaled.measure(cfg.seed, substream_id(i, 0)), x);
    });
    const auto rhs = detail::collect(n, [&](std::size_t i) {
      return delta * invert(unit.measure(cfg.seed, substream_id(i, unit_component)), x / delta);
    });
    record("scaling relation", lhs, rhs);
  }

  // Resolution drift: epsilon against epsilon/2, coupled through a strip.
  auto drift_series = detail::make_series("inverse_scaling_resolution", {"epsilon", "mean_Q", "std_error", "replicas"});
  {
    const Grid grid = domain(std::min(h, eps / 8.0), 2.0 * x + 4.0 * delta);
    const Realizer base(FieldSpec::line(cfg.gamma, delta, eps), grid);
    const Realizer strip(FieldSpec::line(cfg.gamma, eps, eps / 2.0), grid);
    const FieldSpec fine = FieldSpec::line(cfg.gamma, delta, eps / 2.0);
    std::vector<double> q0(n), q1(n);
    parallel_for(n, [&](std::size_t i) {
      std::vector<double> u, s;
      base.field(cfg.seed, substream_id(i, 2), u);
      q0[i] = invert(build_measure(grid, u, base.spec()), x);
      strip.field(cfg.seed, substream_id(i, 3), s);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += s[j];
      q1[i] = invert(build_measure(grid, u, fine), x);
    });
    const EstimateReport e0 = summarize(q0, cfg.seed), e1 = summarize(q1, cfg.seed);
    drift_series.rows.push_back({eps, e0.mean, e0.std_error, std::int64_t(n)});
    drift_series.rows.push_back({eps / 2.0, e1.mean, e1.std_error, std::int64_t(n)});
    const double drift = std::abs(e1.mean - e0.mean) / e0.mean;
    v.add("resolution drift", drift < 0.02, fmt("relative drift of E[Q(x)] %.4f", drift), drift);
  }

  // Exact scaling of the cone field: eta(lambda A) against lambda e^Omega eta'(A)
  // with A = [0, delta], and the inverse law on the window {t <= Q/lambda <= delta}.
  auto window = detail::make_series("inverse_scaling_window", {"side", "event_probability", "events", "replicas"});
  {
    const double top = lambda * delta;
    const Realizer near(FieldSpec::cone(cfg.gamma, delta, eps), domain(h, top));
    const Realizer far(FieldSpec::cone(cfg.gamma, delta, eps / lambda), domain(h / lambda, delta));
    const Lognormal ln{lambda, cfg.gamma, Lognormal::Variant::Omega};
    std::vector<double> m_lhs(n), m_rhs(n), q_lhs(n, NAN), q_rhs(n, NAN);
    parallel_for(n, [&](std::size_t i) {
      const GmcMeasure a = near.measure(cfg.seed, substream_id(i, 4));
      m_lhs[i] = a.total();
      if (wx <= a.total()) {
        const double q = invert(a, wx) / lambda;
        if (q >= wt && q <= delta) q_lhs[i] = q;
      }
      const GmcMeasure b = far.measure(cfg.seed, substream_id(i, 5));
      const double omega = draw_lognormal(ln, cfg.seed, substream_id(i, 6));
      m_rhs[i] = lambda * std::exp(omega) * b.total();
      const double target = wx * std::exp(-omega) / lambda;
      if (target <= b.total()) {
        const double q = invert(b, target);
        if (q >= wt && q <= delta) q_rhs[i] = q;
      }
    });
    record("omega mass law", m_lhs, m_rhs);

    std::vector<double> cl, cr;
    for (double q : q_lhs)
      if (!std::isnan(q)) cl.push_back(q);
    for (double q : q_rhs)
      if (!std::isnan(q)) cr.push_back(q);
    window.rows.push_back({std::string("direct"), double(cl.size()) / double(n), std::int64_t(cl.size()), std::int64_t(n)});
    window.rows.push_back({std::string("lognormal"), double(cr.size()) / double(n), std::int64_t(cr.size()), std::int64_t(n)});
    record("window law", cl, cr);
    if (cfg.gamma != 0.0) {
      const double p = proportion_p(cl.size(), n, cr.size(), n);
      tests.rows.push_back({std::string("window probability"), double(cl.size()) / double(n) - double(cr.size()) / double(n),
                            p, adj, std::int64_t(n), std::int64_t(n)});
      v.add("window probability", p > adj, fmt("event frequencies %zu vs %zu of %zu, p %.4f", cl.size(), cr.size(), n, p),
            p);
    }
  }
  v.series.push_back(std::move(tests));
  v.series.push_back(std::move(drift_series));
  v.series.push_back(std::move(window));
  return v;
}

namespace {

constexpr int kBandLow = -1;  // Whitney bands y in [2^{-n-1}, 2^{-n}], n = -1..5
constexpr int kBandHigh = 5;
constexpr int kSubLevels = 5;
constexpr double kWhitneyMass = 4.0;  // j0 of the coarsest cell reaches [0,4]

// Per-band Whitney partial integrals for one inverse path. q(k) = Q(k 2^-top).
std::vector<double> whitney_bands(const std::vector<double>& q, int top) {
  std::vector<double> bands;
  for (int n = kBandLow; n <= kBandHigh; ++n) {
    const double len = std::ldexp(1.0, -n);
    const double height = std::ldexp(1.0, -n - 1);
    const int sub = n + kSubLevels;
    const int stride = 1 << (top - sub);
    const int per_cell = 1 << kSubLevels;
    const int cells = n < 0 ? 1 : (1 << n);  // cells of D_n meeting [0,1)
    double band = 0.0;
    for (int c = 0; c < cells; ++c) {
      // Sub-intervals of j0(I) = I and its neighbours, clipped at 0.
      const int first = std::max(c - 1, 0) * per_cell, last = (c + 2) * per_cell;
      double s = 0.0, inv = 0.0;
      for (int j = first; j < last; ++j) {
        const double inc = q[std::size_t(j + 1) * stride] - q[std::size_t(j) * stride];
        s += inc;
        inv += 1.0 / inc;
      }
      const double m = last - first;
      const double width = std::min(len, 1.0);  // |I intersect [0,1]|
      band += width * height * (s * inv - m);
    }
    bands.push_back(band);
  }
  return bands;
}

}  // namespace

Verdict exp_ratio_and_dilatation(const ExperimentConfig& cfg) {
  if (cfg.gamma >= 1.0) throw ConfigError("ratio_and_dilatation needs gamma < 1");
  Verdict v = detail::begin(cfg, "ratio_and_dilatation");
  const std::vector<double>& xs = cfg.list("x");
  const double a = cfg.get("a"), c = cfg.get("c"), p = cfg.get("p");
  const double limit = cfg.get("slope_limit"), last_fraction = cfg.get("last_fraction");
  if (!(c > 1.0)) throw ConfigError("ratio_and_dilatation needs c > 1");
  for (double x : xs)
    if (!(x > 0.0 && x < cfg.delta)) throw ConfigError("ratio_and_dilatation needs 0 < x < delta");
  const double reach = std::max(a + (c + 1.0) * *std::max_element(xs.begin(), xs.end()), kWhitneyMass);
  const Realizer field(FieldSpec::line(cfg.gamma, cfg.delta, cfg.eps()), domain(cfg.spacing(), 2.0 * reach + 4.0 * cfg.delta));

  const int top = kBandHigh + kSubLevels;
  const auto knots = static_cast<std::size_t>(kWhitneyMass * std::ldexp(1.0, top));
  const std::size_t n = cfg.replicas, nb = kBandHigh - kBandLow + 1;
  std::vector<std::vector<double>> fwd(xs.size(), std::vector<double>(n)), bwd = fwd;
  std::vector<std::vector<double>> bands(nb, std::vector<double>(n));
  std::vector<double> totals(n);
  parallel_for(n, [&](std::size_t i) {
    const GmcMeasure g = field.measure(cfg.seed, substream_id(i, 0));
    if (g.total() < reach) throw InsufficientMass("ratio_and_dilatation domain carries too little mass");
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double x = xs[k], b = a + c * x;
      const double qj = invert(g, a + x) - invert(g, a), qi = invert(g, b + x) - invert(g, b);
      fwd[k][i] = std::pow(qj / qi, p);
      bwd[k][i] = std::pow(qi / qj, p);
    }
    std::vector<double> q(knots + 1);
    for (std::size_t j = 0; j <= knots; ++j) q[j] = invert(g, std::ldexp(double(j), -top));
    const auto w = whitney_bands(q, top);
    totals[i] = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      bands[b][i] = w[b];
      totals[i] += w[b];
    }
  });

  auto ratio = detail::make_series("ratio_and_dilatation",
                                   {"x", "direction", "mean", "std_error", "ci_low", "ci_high", "replicas"});
  std::vector<double> lx, lf, lb;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const EstimateReport f = summarize(fwd[k], cfg.seed), b = summarize(bwd[k], cfg.seed);
    ratio.rows.push_back({xs[k], std::string("Q(J)/Q(I)"), f.mean, f.std_error, f.ci_low, f.ci_high, std::int64_t(n)});
    ratio.rows.push_back({xs[k], std::string("Q(I)/Q(J)"), b.mean, b.std_error, b.ci_low, b.ci_high, std::int64_t(n)});
    lx.push_back(std::log(xs[k] / cfg.delta));
    lf.push_back(std::log(f.mean));
    lb.push_back(std::log(b.mean));
  }
  const SlopeFit sf = slope_fit(lx, lf), sb = slope_fit(lx, lb);
  v.add("ratio slope", std::abs(sf.slope) < limit, fmt("log-log slope %.4f", sf.slope), std::abs(sf.slope));
  v.add("reverse ratio slope", std::abs(sb.slope) < limit, fmt("log-log slope %.4f", sb.slope), std::abs(sb.slope));

  auto whitney = detail::make_series("ratio_and_dilatation_whitney",
                                     {"band", "y_low", "y_high", "mean", "std_error", "partial_sum"});
  double partial = 0.0;
  bool finite = true, positive = true;
  std::vector<double> band_means;
  for (std::size_t b = 0; b < nb; ++b) {
    const int level = kBandLow + int(b);
    const EstimateReport e = summarize(bands[b], cfg.seed);
    for (double w : bands[b]) finite = finite && std::isfinite(w);
    positive = positive && e.mean >= 0.0;
    partial += e.mean;
    band_means.push_back(e.mean);
    whitney.rows.push_back({std::int64_t(level), std::ldexp(1.0, -level - 1), std::ldexp(1.0, -level), e.mean,
                            e.std_error, partial});
  }
  const double frac = band_means.back() / partial;
  v.add("whitney finite", finite && positive && std::isfinite(partial), fmt("partial integral %.6g", partial), partial);
  v.add("whitney convergence", frac < last_fraction, fmt("last band share %.4f", frac), frac);

  if (cfg.gamma == 0.0) {
    // Every ratio is 1, so each cell contributes m(m-1) for m sub-intervals.
    v.degenerate = true;
    double exact = 0.0;
    for (int lvl = kBandLow; lvl <= kBandHigh; ++lvl) {
      const int cells = lvl < 0 ? 1 : (1 << lvl);
      const double per = 1 << kSubLevels;
      for (int cc = 0; cc < cells; ++cc) {
        const double m = ((cc + 2) - std::max(cc - 1, 0)) * per;
        exact += std::min(std::ldexp(1.0, -lvl), 1.0) * std::ldexp(1.0, -lvl - 1) * m * (m - 1.0);
      }
    }
    const double err = std::abs(partial - exact) / exact;
    v.add("whitney closed form", err <= 1e-9, fmt("relative error %.3g against %.6g", err, exact), err);
  }
  v.series.push_back(std::move(ratio));
  v.series.push_back(std::move(whitney));
  return v;
}

}  // namespace gmclab
