#include "gmclab/stattest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmclab/parallel.hpp"
#include "gmclab/rng.hpp"

namespace gmclab {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

EstimateReport summarize(std::span<const double> values, std::uint64_t seed) {
  EstimateReport r;
  r.replicas = values.size();
  r.seed = seed;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  r.mean = pairwise_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - r.mean) * (values[i] - r.mean);
    r.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  r.ci_low = r.mean - 1.96 * r.std_error;
  r.ci_high = r.mean + 1.96 * r.std_error;
  return r;
}

EstimateReport mc_estimate(const std::function<double(std::uint64_t)>& sampler, std::size_t replicas,
                           std::uint64_t seed, unsigned jobs) {
  if (replicas < 2) throw TooFewSamples("mc_estimate needs at least 2 replicas");
  std::vector<double> values(replicas);
  parallel_for(replicas, [&](std::size_t i) { values[i] = sampler(i); }, jobs);
  return summarize(values, seed);
}

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 50 || b.size() < 50) throw TooFewSamples("KS test needs at least 50 samples per side");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  TestReport r;
  r.statistic = d;
  r.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  r.n1 = x.size();
  r.n2 = y.size();
  return r;
}

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return x[p] < x[q]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t bounded(RandomStream& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t v = rng.bits64();
    if (v < limit) return v % bound;
  }
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("spearman needs equal lengths");
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

TestReport independence_test(std::span<const double> x, std::span<const double> y, std::size_t permutations,
                             std::uint64_t seed, double alpha) {
  if (x.size() != y.size()) throw LengthMismatch("independence test needs equal lengths");
  if (x.size() < 100) throw TooFewSamples("independence test needs at least 100 pairs");
  const auto rx0 = ranks(x), ry0 = ranks(y);
  // Put the pairs in a canonical order first so that relabeling replicas
  // cannot change which permutations are drawn.
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return rx0[p] != rx0[q] ? rx0[p] < rx0[q] : ry0[p] < ry0[q];
  });
  std::vector<double> rx(x.size()), ry(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rx[i] = rx0[order[i]];
    ry[i] = ry0[order[i]];
  }
  const double observed = pearson(rx, ry);
  RandomStream rng(seed, 0x5eed);
  std::size_t extreme = 0;
  std::vector<double> perm = ry;
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[bounded(rng, i + 1)]);
    if (std::fabs(pearson(rx, perm)) >= std::fabs(observed) - 1e-12) ++extreme;
  }
  TestReport r;
  r.statistic = observed;
  r.p_value = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  r.n1 = r.n2 = x.size();
  return r;
}

SlopeFit slope_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("slope fit needs equal lengths");
  if (x.size() < 3) throw TooFewSamples("slope fit needs at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateDesign("all abscissae are equal");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  return f;
}

}  // namespace gmclab
