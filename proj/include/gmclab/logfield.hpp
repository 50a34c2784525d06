#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "gmclab/errors.hpp"
#include "gmclab/rng.hpp"

namespace gmclab {

enum class FieldKind { LineTruncated, ExactCone, CircleTrace, ScaledLambda };

const char* to_string(FieldKind kind);

struct FieldSpec {
  FieldKind kind = FieldKind::LineTruncated;
  double gamma = 0.5;
  double delta = 1.0;
  double epsilon = 1.0 / 128.0;
  double lambda = 0.5;  // ScaledLambda only

  // Throws ValidationError naming the violated condition.
  void validate() const;

  double beta() const noexcept { return 0.5 * gamma * gamma; }
  // Distance beyond which the kernel vanishes (infinite on the circle).
  double cutoff() const noexcept;
  // K(0). Equals ln(delta/epsilon) except on the circle.
  double variance() const noexcept;

  static FieldSpec line(double gamma, double delta, double epsilon);
  static FieldSpec cone(double gamma, double delta, double epsilon);
  static FieldSpec circle(double gamma, double epsilon);
  static FieldSpec scaled(double gamma, double delta, double epsilon, double lambda);
};

struct CovarianceKernel {
  FieldSpec spec;
  bool periodic = false;

  CovarianceKernel() = default;
  explicit CovarianceKernel(const FieldSpec& s) : spec(s), periodic(s.kind == FieldKind::CircleTrace) {}

  double operator()(double d) const noexcept;
};

double eval_kernel(const CovarianceKernel& kernel, double d) noexcept;

// ln(1/lambda) - 1 + lambda
double r_lambda(double lambda) noexcept;

struct Grid {
  double origin = 0.0;
  double h = 1.0;
  std::size_t count = 2;

  double point(std::size_t i) const noexcept { return origin + static_cast<double>(i) * h; }
  // Distance between the first and last sample point.
  double span() const noexcept { return static_cast<double>(count - 1) * h; }
  // Right end of the cell attached to the last sample point.
  double end() const noexcept { return origin + static_cast<double>(count) * h; }

  bool operator==(const Grid&) const = default;

  // `cells` cells of width h starting at origin.
  static Grid cells(double origin, double h, std::size_t cells);
  // count equally spaced points on [0,1) for periodic fields.
  static Grid circle(std::size_t count);
};

// ValidationError if h > epsilon/4 or the ScaledLambda span rule is broken.
void check_resolution(const FieldSpec& spec, const Grid& grid);

struct FieldSample {
  Grid grid;
  std::vector<double> values;
  FieldSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct Lognormal {
  enum class Variant { Omega, Z };
  double lambda = 0.5;
  double gamma = 0.5;
  Variant variant = Variant::Omega;

  double variance() const noexcept;  // of the underlying N(0, sigma^2)
};

// gamma*N(0,sigma^2) - gamma^2 sigma^2/2
double draw_lognormal(const Lognormal& ln, std::uint64_t seed, std::uint64_t stream = 0);
double draw_lognormal(const Lognormal& ln, RandomStream& rng);

// Dense matrix, row-major, n x n.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> data;
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * n + j]; }
};

SymmetricMatrix covariance_matrix(const CovarianceKernel& kernel, const Grid& grid);

enum class SamplingMethod { Auto, Cholesky, Circulant };

// Precomputes the factorization for one (spec, grid) pair and then draws
// independent realizations cheaply. Thread safe after construction.
class FieldSampler {
 public:
  FieldSampler(const FieldSpec& spec, const Grid& grid, SamplingMethod method = SamplingMethod::Auto);
  ~FieldSampler();
  FieldSampler(FieldSampler&&) noexcept;
  FieldSampler& operator=(FieldSampler&&) noexcept;

  const FieldSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return grid_; }
  SamplingMethod method() const noexcept { return method_; }
  // Largest diagonal jitter the Cholesky path needed (0 for circulant).
  double jitter() const noexcept { return jitter_; }

  FieldSample sample(std::uint64_t seed, std::uint64_t stream = 0) const;
  // Writes grid.count values; consumes normals from rng.
  void sample_into(RandomStream& rng, double* out) const;

 private:
  struct Circulant;

  FieldSpec spec_;
  Grid grid_;
  SamplingMethod method_;
  double jitter_ = 0.0;
  std::vector<double> packed_;  // Cholesky factor, lower triangle by rows
  std::unique_ptr<Circulant> circulant_;
};

// Exact Cholesky sampling; deterministic in (spec, grid, seed).
FieldSample sample_field(const FieldSpec& spec, const Grid& grid, std::uint64_t seed);

// Sum of independent fields at adjacent scale bands: coarse (delta1, eps1) and
// fine (eps1, eps2) give the LineTruncated field (delta1, eps2).
FieldSample superpose_scales(const FieldSample& coarse, const FieldSample& fine);

}  // namespace gmclab
