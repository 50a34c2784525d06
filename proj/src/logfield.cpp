#include "gmclab/logfield.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gmclab {

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::LineTruncated: return "line";
    case FieldKind::ExactCone: return "cone";
    case FieldKind::CircleTrace: return "circle";
    case FieldKind::ScaledLambda: return "scaled";
  }
  return "?";
}

void FieldSpec::validate() const {
  if (!(gamma >= 0.0) || !(gamma * gamma < 2.0)) throw ValidationError("gamma² < 2 required (got gamma=" + std::to_string(gamma) + ")");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon > 0 required");
  if (kind == FieldKind::CircleTrace) {
    if (epsilon > 2.0 / std::numbers::pi) throw ValidationError("circle field needs epsilon <= 2/pi");
    return;
  }
  if (!(delta > 0.0)) throw ValidationError("delta > 0 required");
  if (epsilon > delta) throw ValidationError("epsilon <= delta required");
  if (kind == FieldKind::ScaledLambda && !(lambda > 0.0 && lambda < 1.0))
    throw ValidationError("lambda in (0,1) required");
}

double FieldSpec::cutoff() const noexcept {
  switch (kind) {
    case FieldKind::CircleTrace: return std::numeric_limits<double>::infinity();
    case FieldKind::ScaledLambda: return delta / lambda;
    default: return delta;
  }
}

double FieldSpec::variance() const noexcept { return eval_kernel(CovarianceKernel(*this), 0.0); }

FieldSpec FieldSpec::line(double gamma, double delta, double epsilon) {
  return {FieldKind::LineTruncated, gamma, delta, epsilon, 0.5};
}
FieldSpec FieldSpec::cone(double gamma, double delta, double epsilon) {
  return {FieldKind::ExactCone, gamma, delta, epsilon, 0.5};
}
FieldSpec FieldSpec::circle(double gamma, double epsilon) {
  return {FieldKind::CircleTrace, gamma, 1.0, epsilon, 0.5};
}
FieldSpec FieldSpec::scaled(double gamma, double delta, double epsilon, double lambda) {
  return {FieldKind::ScaledLambda, gamma, delta, epsilon, lambda};
}

double r_lambda(double lambda) noexcept { return std::log(1.0 / lambda) - 1.0 + lambda; }

namespace {

double line_kernel(double delta, double eps, double d) {
  if (d >= delta) return 0.0;
  if (d <= eps) return std::log(delta / eps) - (1.0 / eps - 1.0 / delta) * d;
  return std::log(delta / d) + d / delta - 1.0;
}

double cone_kernel(double delta, double eps, double d) {
  if (d >= delta) return 0.0;
  if (d <= eps) return std::log(delta / eps) + 1.0 - d / eps;
  return std::log(delta / d);
}

double scaled_kernel(double delta, double eps, double lambda, double d) {
  if (d >= delta / lambda) return 0.0;
  const double tail = (1.0 - lambda) * (1.0 - d / delta);
  if (d <= eps) return std::log(delta / eps) - (1.0 / eps - 1.0 / delta) * d + tail;
  return std::log(delta / d) - 1.0 + d / delta + tail;
}

// Periodised hyperbolic-area covariance on the unit circle.
double circle_kernel(double eps, double d) {
  constexpr double pi = std::numbers::pi;
  double y = d - std::floor(d);
  if (y > 0.5) y = 1.0 - y;
  const double w = (2.0 / pi) * std::atan(pi * eps / 2.0);
  if (y > w) return 2.0 * std::numbers::ln2 + std::log(1.0 / (2.0 * std::sin(pi * y)));
  return std::log(1.0 / eps) + 0.5 * std::log(pi * pi * eps * eps + 4.0) + w / eps - std::log(pi) - y / eps -
         std::log(std::cos(pi * y / 2.0));
}

}  // namespace

double CovarianceKernel::operator()(double d) const noexcept {
  d = std::fabs(d);
  switch (spec.kind) {
    case FieldKind::LineTruncated: return line_kernel(spec.delta, spec.epsilon, d);
    case FieldKind::ExactCone: return cone_kernel(spec.delta, spec.epsilon, d);
    case FieldKind::CircleTrace: return circle_kernel(spec.epsilon, d);
    case FieldKind::ScaledLambda: return scaled_kernel(spec.delta, spec.epsilon, spec.lambda, d);
  }
  return 0.0;
}

double eval_kernel(const CovarianceKernel& kernel, double d) noexcept { return kernel(d); }

Grid Grid::cells(double origin, double h, std::size_t cells) { return Grid{origin, h, cells}; }

Grid Grid::circle(std::size_t count) { return Grid{0.0, 1.0 / static_cast<double>(count), count}; }

void check_resolution(const FieldSpec& spec, const Grid& grid) {
  if (grid.count < 2) throw ValidationError("grid needs at least 2 points");
  if (!(grid.h > 0.0)) throw ValidationError("grid spacing must be positive");
  if (grid.h > spec.epsilon / 4.0 * (1.0 + 1e-12)) throw ValidationError("grid spacing h <= epsilon/4 required");
  if (spec.kind == FieldKind::ScaledLambda && grid.span() > spec.delta * (1.0 + 1e-12))
    throw ValidationError("scaled field evaluated on a span longer than delta");
}

double Lognormal::variance() const noexcept {
  return variant == Variant::Omega ? std::log(1.0 / lambda) : r_lambda(lambda);
}

double draw_lognormal(const Lognormal& ln, RandomStream& rng) {
  if (!(ln.lambda > 0.0 && ln.lambda < 1.0)) throw ValidationError("lambda in (0,1) required");
  const double var = ln.variance();
  return ln.gamma * std::sqrt(var) * rng.normal() - 0.5 * ln.gamma * ln.gamma * var;
}

double draw_lognormal(const Lognormal& ln, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  return draw_lognormal(ln, rng);
}

SymmetricMatrix covariance_matrix(const CovarianceKernel& kernel, const Grid& grid) {
  kernel.spec.validate();
  SymmetricMatrix m{grid.count, std::vector<double>(grid.count * grid.count)};
  // Stationary kernel: one evaluation per lag.
  std::vector<double> lag(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) lag[k] = kernel(static_cast<double>(k) * grid.h);
  for (std::size_t i = 0; i < grid.count; ++i)
    for (std::size_t j = 0; j < grid.count; ++j) m.data[i * grid.count + j] = lag[i > j ? i - j : j - i];
  return m;
}

FieldSample superpose_scales(const FieldSample& coarse, const FieldSample& fine) {
  if (!(coarse.grid == fine.grid)) throw ScaleMismatch("superposed fields live on different grids");
  if (coarse.spec.kind != FieldKind::LineTruncated || fine.spec.kind != FieldKind::LineTruncated)
    throw ScaleMismatch("only line-truncated bands can be superposed");
  if (std::fabs(coarse.spec.epsilon - fine.spec.delta) > 1e-12 * coarse.spec.epsilon)
    throw ScaleMismatch("fine band must start where the coarse band stops");
  if (coarse.spec.gamma != fine.spec.gamma) throw ScaleMismatch("bands disagree on gamma");
  FieldSample out = coarse;
  out.spec.epsilon = fine.spec.epsilon;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += fine.values[i];
  return out;
}

}  // namespace gmclab
