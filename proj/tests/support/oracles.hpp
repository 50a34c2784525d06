#pragma once
// Independent reference values: kernels recomputed as hyperbolic areas of
// white-noise regions, plus small numeric helpers. Nothing here calls the
// closed forms in the library.

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline double gk(auto f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

inline double tail(auto f, double a) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double y) { return f(y); }, a, std::numeric_limits<double>::infinity());
}

// Overlap area of two vertical wedges of half-width y/2 (height y in [eps, delta])
// whose centres are d apart, measured with dy/y^2.
inline double line_area(double delta, double eps, double d) {
  if (d >= delta) return 0.0;
  return gk([&](double y) { return (y - d) / (y * y); }, std::max(eps, d), delta);
}

// Cone region: width grows like y up to delta and then stays at delta.
inline double cone_area(double delta, double eps, double d) {
  auto f = [&](double y) { return std::max(std::min(y, delta) - d, 0.0) / (y * y); };
  const double lo = std::max(eps, d);
  if (lo >= delta) return 0.0;
  return gk(f, lo, delta) + (delta - d) / delta;  // beyond delta the width is constant
}

inline double scaled_area(double delta, double eps, double lambda, double d) {
  if (d >= delta / lambda) return 0.0;
  const double r = std::log(1.0 / lambda) - 1.0 + lambda;
  return line_area(delta, lambda * eps, lambda * d) - r;
}

// Periodised wedges on the unit circle: width w(y) = (2/pi) atan(pi y / 2).
inline double circle_area(double eps, double d) {
  constexpr double pi = std::numbers::pi;
  d = d - std::floor(d);
  if (d > 0.5) d = 1.0 - d;
  auto w = [&](double y) { return (2.0 / pi) * std::atan(pi * y / 2.0); };
  auto f = [&](double y) { return (std::max(w(y) - d, 0.0) + std::max(w(y) - (1.0 - d), 0.0)) / (y * y); };
  auto inv = [&](double v) { return (2.0 / pi) * std::tan(pi * v / 2.0); };
  std::vector<double> cuts{eps};
  for (double k : {d, 1.0 - d}) {
    const double y = inv(k);
    if (y > eps && y < 1e6) cuts.push_back(y);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk(f, cuts[i], cuts[i + 1]);
  return total + tail(f, cuts.back());
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace oracle
