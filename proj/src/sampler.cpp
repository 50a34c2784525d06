#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <mutex>

#include "gmclab/logfield.hpp"
#include "gmclab/simd.hpp"

namespace gmclab {
namespace {

// FFTW's planner is not reentrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t nice_fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

constexpr std::size_t kCholeskyLimit = 1024;

}  // namespace

// Exact sampling through a periodic embedding. For kernels that are areas of
// wedge regions with support R, wrapping the line onto a cylinder of
// circumference P >= 2R yields a genuine covariance equal to K(min(d, P-d)),
// and for P >= span + R it coincides with K on the sampled window.
struct FieldSampler::Circulant {
  std::size_t m = 0;
  std::vector<double> factor;  // sqrt(eigenvalue)/m, length m/2+1
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Circulant() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

FieldSampler::FieldSampler(const FieldSpec& spec, const Grid& grid, SamplingMethod method)
    : spec_(spec), grid_(grid), method_(method) {
  spec_.validate();
  if (grid.count < 1 || !(grid.h > 0.0)) throw ValidationError("grid needs count >= 1 and h > 0");
  if (spec.kind == FieldKind::ScaledLambda && grid.span() > spec.delta * (1.0 + 1e-12))
    throw ValidationError("scaled field evaluated on a span longer than delta");
  const CovarianceKernel kernel(spec_);

  if (method_ == SamplingMethod::Auto)
    method_ = (spec.kind == FieldKind::ScaledLambda || grid.count <= kCholeskyLimit) ? SamplingMethod::Cholesky
                                                                                    : SamplingMethod::Circulant;
  if (method_ == SamplingMethod::Circulant && spec.kind == FieldKind::ScaledLambda)
    throw ValidationError("scaled field has no periodic embedding; use Cholesky");

  const std::size_t n = grid.count;
  if (method_ == SamplingMethod::Cholesky) {
    const SymmetricMatrix cov = covariance_matrix(kernel, grid);
    Eigen::Map<const Eigen::MatrixXd> a(cov.data.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double diag = std::max(kernel(0.0), 1e-300);
    for (double rel : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
      Eigen::MatrixXd work = a;
      work.diagonal().array() += rel * diag;
      Eigen::LLT<Eigen::MatrixXd> llt(work);
      if (llt.info() != Eigen::Success) continue;
      const Eigen::MatrixXd l = llt.matrixL();
      packed_.resize(n * (n + 1) / 2);
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) packed_[k++] = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      jitter_ = rel * diag;
      return;
    }
    throw NotPositiveDefinite("covariance matrix is not positive definite even with 1e-8 relative jitter");
  }

  auto c = std::make_unique<Circulant>();
  if (kernel.periodic) {
    if (std::fabs(grid.h * static_cast<double>(n) - 1.0) > 1e-12 || grid.origin != 0.0)
      throw ValidationError("periodic sampling needs a grid covering [0,1) exactly");
    c->m = n;
  } else {
    const double support = spec_.cutoff();
    const double period = std::max(grid.span() + support, 2.0 * support);
    c->m = nice_fft_size(std::max<std::size_t>(n, static_cast<std::size_t>(std::ceil(period / grid.h - 1e-9))));
  }
  const std::size_t m = c->m;
  const std::size_t half = m / 2 + 1;
  std::vector<double> row(m);
  for (std::size_t j = 0; j < m; ++j) row[j] = kernel(grid.h * static_cast<double>(std::min(j, m - j)));
  std::vector<fftw_complex> spec_buf(half);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan eig = fftw_plan_dft_r2c_1d(static_cast<int>(m), row.data(), spec_buf.data(), flags);
    fftw_execute(eig);
    fftw_destroy_plan(eig);
    std::vector<double> scratch(m);
    c->forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), scratch.data(), spec_buf.data(), flags);
    c->backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec_buf.data(), scratch.data(), flags);
  }
  double top = 0.0;
  for (std::size_t k = 0; k < half; ++k) top = std::max(top, spec_buf[k][0]);
  c->factor.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    double lam = spec_buf[k][0];
    if (lam < 0.0) {
      if (lam < -1e-8 * top) throw NotPositiveDefinite("circulant embedding has a negative eigenvalue");
      lam = 0.0;
    }
    c->factor[k] = std::sqrt(lam) / static_cast<double>(m);
  }
  circulant_ = std::move(c);
}

FieldSampler::~FieldSampler() = default;
FieldSampler::FieldSampler(FieldSampler&&) noexcept = default;
FieldSampler& FieldSampler::operator=(FieldSampler&&) noexcept = default;

void FieldSampler::sample_into(RandomStream& rng, double* out) const {
  const std::size_t n = grid_.count;
  const auto& k = simd::kernels();
  if (method_ == SamplingMethod::Cholesky) {
    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    k.lower_tri_matvec(packed_.data(), n, z.data(), out);
    return;
  }
  const Circulant& c = *circulant_;
  std::vector<double> z(c.m);
  for (auto& v : z) v = rng.normal();
  std::vector<fftw_complex> freq(c.m / 2 + 1);
  fftw_execute_dft_r2c(c.forward, z.data(), freq.data());
  k.scale_complex(&freq[0][0], c.factor.data(), freq.size());
  fftw_execute_dft_c2r(c.backward, freq.data(), z.data());
  std::copy_n(z.begin(), n, out);
}

FieldSample FieldSampler::sample(std::uint64_t seed, std::uint64_t stream) const {
  FieldSample s{grid_, std::vector<double>(grid_.count), spec_, seed, stream};
  RandomStream rng(seed, stream);
  sample_into(rng, s.values.data());
  return s;
}

FieldSample sample_field(const FieldSpec& spec, const Grid& grid, std::uint64_t seed) {
  return FieldSampler(spec, grid, SamplingMethod::Cholesky).sample(seed, 0);
}

}  // namespace gmclab
