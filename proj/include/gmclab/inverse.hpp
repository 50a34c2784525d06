#pragma once

#include <cstdint>
#include <span>

#include "gmclab/gmc.hpp"

namespace gmclab {

// Q(x) = inf{t : eta(origin, t) >= x}, read off the piecewise-linear
// cumulative on demand. Positions are absolute grid coordinates.
double invert(const GmcMeasure& measure, double x);

// Read-only view; the measure must outlive it.
class QuantilePath {
 public:
  explicit QuantilePath(const GmcMeasure& measure) : m_(&measure) {}

  const GmcMeasure& measure() const noexcept { return *m_; }
  double total() const noexcept { return m_->total(); }
  double operator()(double x) const { return invert(*m_, x); }

 private:
  const GmcMeasure* m_;
};

// Q(b) - Q(a)
double increment(const QuantilePath& path, double a, double b);

// Q_x . T = inf{t >= 0 : eta(T, T+t) >= x}
double semigroup_shift(const GmcMeasure& measure, double x, double T);

struct DyadicApprox {
  int level = 0;
  double value = 0.0;  // (m+1)/2^n with m/2^n <= Q(a) - origin < (m+1)/2^n
};

DyadicApprox dyadic_approx(const QuantilePath& path, double a, int n);

// h^{-1}(x) = Q(x * total) - origin for x in [0,1].
double normalized_inverse(const QuantilePath& path, double x);

// Periodic extension of the normalized inverse of a circle measure:
// h^{-1}(x + k) = h^{-1}(x) + k.
class PeriodicQuantile {
 public:
  explicit PeriodicQuantile(const GmcMeasure& measure);
  double operator()(double x) const;

 private:
  QuantilePath path_;
};

struct ScaleComparison {
  double q_c = 0.0;      // fine Q(c)
  double q_cy = 0.0;     // fine Q(c+y)
  double g_c = 1.0;      // c / eta_n(origin, Q(c))
  double g_int = 1.0;    // y / eta_n(Q(c), Q(c+y))
  double g_int_alt = 1.0;  // eta_m / eta_n over the same interval
  double lhs = 0.0;      // Q(c+y) - Q(c)
  double rhs = 0.0;      // through the coarse inverse
  double ratio_min = 1.0;  // density-ratio range over the interval
  double ratio_max = 1.0;
};

// coarse: measure at scale n; fine: scale m >= n from the same Gaussian draw.
ScaleComparison scale_comparison(const GmcMeasure& coarse, const GmcMeasure& fine, double c, double y);

// Density of Q_omega(x) at t in (0,1): average over eta(0,1) samples of the
// y-integral of the Gaussian kernel, evaluated by adaptive Gauss-Kronrod
// with at most `quad_depth` bisections.
double density_Q_omega(double x, double t, double gamma, std::span<const double> eta1_samples, int quad_depth = 15);
// The y-integrand itself, exposed for tests.
double density_Q_omega_integrand(double y, double t, double gamma);

}  // namespace gmclab
