#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gmclab/inverse.hpp"
#include "oracles.hpp"

using namespace gmclab;

namespace {
GmcMeasure random_measure(double gamma, std::uint64_t seed, double delta = 1.0) {
  const FieldSpec s = FieldSpec::line(gamma, delta, 1.0 / 32);
  return build_measure(sample_field(s, Grid::cells(0, 1.0 / 128, 128), seed));
}
}  // namespace

TEST_CASE("inverse at knots and endpoints") {
  const auto m = random_measure(0.8, 1);
  CHECK(invert(m, 0.0) == 0.0);
  CHECK(invert(m, m.total()) == m.end());
  for (std::size_t i = 0; i < m.cumulative.size(); ++i) CHECK(invert(m, m.cumulative[i]) == m.grid.point(i));
  CHECK_THROWS_AS(invert(m, -1e-3), OutOfDomain);
  CHECK_THROWS_AS(invert(m, m.total() * 1.01), OutOfDomain);
}

TEST_CASE("gamma zero inverse is the identity") {
  const auto m = random_measure(0.0, 2);
  const QuantilePath q(m);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.999, 1.0}) {
    CHECK(q(x) == doctest::Approx(x).epsilon(1e-15));
    CHECK(normalized_inverse(q, x) == doctest::Approx(x).epsilon(1e-15));
  }
  for (double T : {0.0, 0.2, 0.6}) CHECK(semigroup_shift(m, 0.3, T) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("inverse pair identities, monotonicity, increments") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_measure(1.0, 100 + seed);
    const QuantilePath q(m);
    RandomStream r(seed);
    double prev = -1;
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i) xs.push_back(r.uniform() * m.total());
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
      const double t = q(x);
      CHECK(std::fabs(m.cumulative_at(t) - x) <= 1e-13);
      CHECK(t > prev);
      prev = t;
      const double s = r.uniform();
      CHECK(std::fabs(q(m.cumulative_at(s)) - s) <= 1e-13);
    }
    CHECK(increment(q, 0.1 * m.total(), 0.1 * m.total()) == 0.0);
    CHECK(increment(q, 0.0, m.total()) == m.end());
    const double a = 0.2 * m.total(), b = 0.5 * m.total(), c = 0.9 * m.total();
    CHECK(std::fabs(increment(q, a, c) - increment(q, a, b) - increment(q, b, c)) <= 1e-14);
  }
}

TEST_CASE("semigroup identity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_measure(0.9, 200 + seed);
    const QuantilePath q(m);
    RandomStream r(seed);
    for (int i = 0; i < 50; ++i) {
      double a = r.uniform() * m.total(), b = r.uniform() * m.total();
      if (a > b) std::swap(a, b);
      CHECK(std::fabs(semigroup_shift(m, b - a, q(a)) + q(a) - q(b)) <= 1e-10);
    }
    CHECK(semigroup_shift(m, 0.0, 0.4) == 0.0);
    CHECK_THROWS_AS(semigroup_shift(m, m.total(), 0.5), InsufficientMass);
  }
}

TEST_CASE("dyadic approximation") {
  // A measure with Q(a) = 0.3 at a = 0.3: gamma zero.
  const auto m = random_measure(0.0, 3);
  const QuantilePath q(m);
  CHECK(dyadic_approx(q, 0.3, 3).value == 0.375);
  CHECK(dyadic_approx(q, 0.25, 3).value == 0.375);  // 2/8 exactly dyadic: half-open cell
  const auto w = random_measure(1.0, 4);
  const QuantilePath qw(w);
  RandomStream r(7);
  for (int i = 0; i < 200; ++i) {
    const double a = r.uniform() * w.total();
    const double exact = qw(a);
    double prev = 1e300;
    for (int n = 0; n < 30; ++n) {
      const auto d = dyadic_approx(qw, a, n);
      CHECK(d.value - std::ldexp(1.0, -n) <= exact);
      CHECK(exact < d.value);
      CHECK(d.value <= prev);
      prev = d.value;
    }
  }
}

TEST_CASE("normalized inverse") {
  const auto m = random_measure(0.8, 5);
  const QuantilePath q(m);
  CHECK(normalized_inverse(q, 0.0) == 0.0);
  CHECK(normalized_inverse(q, 1.0) == m.end());
  for (double x : {0.01, 0.2, 0.5, 0.77}) {
    const double t = normalized_inverse(q, x);
    CHECK(std::fabs(m.cumulative_at(t) / m.total() - x) <= 1e-10);
  }
  CHECK_THROWS_AS(normalized_inverse(q, 1.5), OutOfDomain);
}

TEST_CASE("periodic inverse on the circle") {
  const FieldSpec s = FieldSpec::circle(0.7, 1.0 / 32);
  const auto m = build_measure(sample_field(s, Grid::circle(256), 9));
  const PeriodicQuantile p(m);
  for (double x : {0.0, 0.125, 0.5, 0.75, 0.9375}) {
    for (int k : {-2, -1, 1, 3}) CHECK(p(x + k) == p(x) + k);
  }
  CHECK(p(1.0) == 1.0);
}

TEST_CASE("scale comparison between nested scales") {
  const Grid g = Grid::cells(0, 1.0 / 256, 256);
  const FieldSpec coarse_spec = FieldSpec::line(0.8, 1.0, 1.0 / 16), strip = FieldSpec::line(0.8, 1.0 / 16, 1.0 / 64);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = sample_field(coarse_spec, g, seed);
    const auto f = superpose_scales(c, sample_field(strip, g, 1000 + seed));
    // the coarse measure is normalised with its own variance
    const auto mn = build_measure(c), mm = build_measure(f);
    for (double cc : {0.0, 0.1, 0.3}) {
      const double y = 0.25 * mm.total();
      const auto s = scale_comparison(mn, mm, cc * mm.total(), y);
      CHECK(std::fabs(s.lhs - s.rhs) <= 1e-8);
      CHECK(s.g_int == doctest::Approx(s.g_int_alt).epsilon(1e-10));
      CHECK(s.ratio_min <= s.g_int * (1 + 1e-12));
      CHECK(s.g_int <= s.ratio_max * (1 + 1e-12));
    }
    const auto same = scale_comparison(mm, mm, 0.2 * mm.total(), 0.3 * mm.total());
    CHECK(same.g_c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same.g_int == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(same.lhs - same.rhs) <= 1e-12);
  }
  const auto other = build_measure(sample_field(coarse_spec, Grid::cells(0, 1.0 / 128, 128), 1));
  const auto mine = build_measure(sample_field(coarse_spec, g, 1));
  CHECK_THROWS_AS(scale_comparison(other, mine, 0.1, 0.1), ScaleMismatch);
}

namespace {
// t-derivative of P(t e^{Omega_t} eta1 >= x) for one eta1 value.
double closed_form(double x, double t, double gamma, double eta1) {
  const double L = std::log(1 / t), c = 1 + gamma * gamma / 2, A = std::log(x / eta1);
  const double z = (A + c * L) / (gamma * std::sqrt(L));
  const double phi = std::exp(-z * z / 2) / std::sqrt(2 * std::numbers::pi);
  return phi * (c * L - A) / (2 * gamma * t * std::pow(L, 1.5));
}
}  // namespace

TEST_CASE("density of Q_omega against the closed-form derivative") {
  const std::vector<double> etas{0.3, 0.8, 1.0, 1.7, 4.0};
  for (double gamma : {0.3, 0.5, 1.0})
    for (double x : {0.2, 0.5, 1.0})
      for (double t : {0.01, 0.2, 0.5, 0.9, 0.999}) {
        double expect = 0.0;
        for (double e : etas) expect += closed_form(x, t, gamma, e);
        expect /= static_cast<double>(etas.size());
        CAPTURE(gamma);
        CAPTURE(x);
        CAPTURE(t);
        CHECK(std::fabs(density_Q_omega(x, t, gamma, etas) - expect) <= 1e-7 * std::fabs(expect) + 1e-9);
      }
}

TEST_CASE("density of Q_omega limits") {
  // x must differ from every sample: at x = eta(1) the density blows up as t -> 1.
  const std::vector<double> etas{0.7, 1.3, 2.0};
  for (double t : {1e-9, 1e-6, 1 - 1e-6, 1 - 1e-8}) CHECK(std::fabs(density_Q_omega(0.5, t, 0.5, etas)) < 1e-4);
  for (double t : {0.1, 0.5, 0.9}) CHECK(std::fabs(density_Q_omega(1e6, t, 0.5, etas)) < 1e-12);
  CHECK_THROWS_AS(density_Q_omega(0.5, 1.0, 0.5, etas), OutOfDomain);
  CHECK(density_Q_omega_integrand(-0.2, 0.3, 0.5) > 0.0);
}
