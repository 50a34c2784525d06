#include "gmclab/inverse.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace gmclab {

double invert(const GmcMeasure& m, double x) {
  const double total = m.total();
  if (!(x >= 0.0 && x <= total * (1.0 + 1e-12))) throw OutOfDomain("inverse queried outside [0, total mass]");
  if (x >= total) return m.end();
  const auto it = std::upper_bound(m.cumulative.begin(), m.cumulative.end(), x);
  const auto i = static_cast<std::size_t>(it - m.cumulative.begin()) - 1;
  if (m.cumulative[i] == x) return m.grid.point(i);
  return m.grid.point(i) + m.grid.h * (x - m.cumulative[i]) / m.cell_mass(i);
}

double increment(const QuantilePath& path, double a, double b) {
  if (a > b) throw OutOfDomain("increment needs a <= b");
  return path(b) - path(a);
}

double semigroup_shift(const GmcMeasure& m, double x, double T) {
  if (x < 0.0) throw OutOfDomain("semigroup shift needs x >= 0");
  const double start = m.cumulative_at(T);
  if (x == 0.0) return 0.0;
  const double target = start + x;
  if (target > m.total() * (1.0 + 1e-12)) throw InsufficientMass("not enough mass after T");
  return invert(m, std::min(target, m.total())) - T;
}

DyadicApprox dyadic_approx(const QuantilePath& path, double a, int n) {
  if (n < 0) throw ValidationError("dyadic level must be nonnegative");
  const double q = path(a) - path.measure().begin();
  const double m = std::floor(std::ldexp(q, n));
  return {n, std::ldexp(m + 1.0, -n)};
}

double normalized_inverse(const QuantilePath& path, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw OutOfDomain("normalized inverse needs x in [0,1]");
  if (x == 1.0) return path.measure().end() - path.measure().begin();
  return path(x * path.total()) - path.measure().begin();
}

PeriodicQuantile::PeriodicQuantile(const GmcMeasure& measure) : path_(measure) {
  if (std::fabs(measure.end() - measure.begin() - 1.0) > 1e-12)
    throw ValidationError("periodic inverse needs a measure on a unit period");
}

double PeriodicQuantile::operator()(double x) const {
  const double whole = std::floor(x);
  return whole + normalized_inverse(path_, x - whole);
}

ScaleComparison scale_comparison(const GmcMeasure& coarse, const GmcMeasure& fine, double c, double y) {
  if (!(coarse.grid == fine.grid)) throw ScaleMismatch("scale comparison needs a shared grid");
  if (c < 0.0 || y <= 0.0) throw OutOfDomain("scale comparison needs c >= 0 and y > 0");
  ScaleComparison s;
  s.q_c = invert(fine, c);
  s.q_cy = invert(fine, c + y);
  s.lhs = s.q_cy - s.q_c;

  const double h = fine.grid.h;
  const double o = fine.grid.origin;
  const auto first = static_cast<std::size_t>(std::floor((s.q_c - o) / h));
  const auto last = std::max(first + 1, static_cast<std::size_t>(std::ceil((s.q_cy - o) / h)));
  s.ratio_min = std::numeric_limits<double>::infinity();
  s.ratio_max = 0.0;
  for (std::size_t i = first; i < std::min(last, fine.grid.count); ++i) {
    const double r = fine.cell_mass(i) / coarse.cell_mass(i);
    s.ratio_min = std::min(s.ratio_min, r);
    s.ratio_max = std::max(s.ratio_max, r);
  }

  const double eta_n_before = coarse.cumulative_at(s.q_c);
  s.g_c = c > 0.0 ? c / eta_n_before : fine.cell_mass(0) / coarse.cell_mass(0);
  const double eta_n_inside = mass(coarse, s.q_c, s.q_cy);
  s.g_int = y / eta_n_inside;
  s.g_int_alt = mass(fine, s.q_c, s.q_cy) / eta_n_inside;
  const double lo = c / s.g_c;
  const double hi = (c + y * s.g_c / s.g_int) / s.g_c;
  s.rhs = invert(coarse, std::min(hi, coarse.total())) - invert(coarse, lo);
  return s;
}

double density_Q_omega_integrand(double y, double t, double gamma) {
  const double L = std::log(1.0 / t);
  const double c = 1.0 + 0.5 * gamma * gamma;
  const double g2 = gamma * gamma;
  const double gauss = std::exp(-(y + c * L) * (y + c * L) / (2.0 * g2 * L));
  const double pref = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * 2.0 * g2 * gamma * std::pow(L, 2.5) * t);
  return pref * gauss * (c * c * L * L + g2 * L - y * y);
}

double density_Q_omega(double x, double t, double gamma, std::span<const double> eta1_samples, int quad_depth) {
  if (!(t > 0.0 && t < 1.0)) throw OutOfDomain("density of Q_omega is only represented for t in (0,1)");
  if (!(gamma > 0.0)) throw ValidationError("density of Q_omega needs gamma > 0");
  if (eta1_samples.empty()) throw TooFewSamples("no samples of eta(0,1)");
  const double L = std::log(1.0 / t);
  const double c = 1.0 + 0.5 * gamma * gamma;
  const double sd = gamma * std::sqrt(L);
  // Integrate in the standardised variable s = (y + cL)/sd. The polynomial
  // factor becomes sd^2 (1 - s^2) + 2 c L sd s and the prefactor folds in,
  // which keeps the integrand O(1/L) instead of O(L^{-5/2}) near t = 1.
  auto f = [&](double s) {
    const double phi = std::exp(-0.5 * s * s) / std::sqrt(2.0 * std::numbers::pi);
    return phi * ((1.0 - s * s) / (2.0 * L) + c * s / sd) / t;
  };
  // Beyond this the Gaussian factor is below 1e-14 of its peak.
  const double cut = std::sqrt(2.0 * std::log(1e14));

  double sum = 0.0;
  for (double eta1 : eta1_samples) {
    const double lo = std::max((std::log(x / eta1) + c * L) / sd, -cut);
    if (lo >= cut) continue;
    double err = 0.0, l1 = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, cut, quad_depth, 1e-10, &err, &l1);
    if (!std::isfinite(v) || err > 1e-6 * l1 + 1e-300) throw DegenerateTail("y-quadrature did not converge");
    sum += v;
  }
  return sum / static_cast<double>(eta1_samples.size());
}

}  // namespace gmclab
