#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gmclab/logfield.hpp"
#include "gmclab/stattest.hpp"

namespace gmclab {

// Piecewise-linear cumulative mass of exp(gamma U - gamma^2 K(0)/2) dx.
// Sample point i carries the cell [x_i, x_i + h), so there are count+1 knots
// and the measure lives on [origin, grid.end()].
struct GmcMeasure {
  Grid grid;
  std::vector<double> cumulative;  // cumulative[0] = 0, size count+1
  FieldSpec spec;

  double total() const noexcept { return cumulative.back(); }
  double begin() const noexcept { return grid.origin; }
  double end() const noexcept { return grid.end(); }
  double cell_mass(std::size_t i) const noexcept { return cumulative[i + 1] - cumulative[i]; }
  // eta(origin, t); OutOfDomain outside [begin, end].
  double cumulative_at(double t) const;
};

GmcMeasure build_measure(const FieldSample& sample);
// Same construction from raw values (used when several bands share a draw).
GmcMeasure build_measure(const Grid& grid, std::span<const double> values, const FieldSpec& spec);

double mass(const GmcMeasure& measure, double a, double b);

// q - (gamma^2/2)(q^2 - q)
double zeta(double q, double gamma) noexcept;

struct MomentEstimate {
  double q = 0.0;
  EstimateReport report;
  // Mean after dropping the top 1% of replicas; only set when q > 0.8/beta.
  std::optional<double> trimmed_mean;
};

// Monte Carlo E[eta(0,t)^q] on a grid of spacing h (default epsilon/4).
MomentEstimate estimate_moment(const FieldSpec& spec, double t, double q, std::size_t replicas, std::uint64_t seed,
                               double h = 0.0);
// Several exponents from the same replicas.
std::vector<MomentEstimate> estimate_moments(const FieldSpec& spec, double t, std::span<const double> qs,
                                             std::size_t replicas, std::uint64_t seed, double h = 0.0);

// eta_R: the density multiplied by exp(gamma^2 K(|x - anchor|)).
struct TiltedMeasure {
  GmcMeasure base;
  GmcMeasure tilted;
  double anchor = 0.0;
};

TiltedMeasure build_tilted(const FieldSample& sample, double anchor);

}  // namespace gmclab
