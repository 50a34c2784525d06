#include <cmath>

#include "gmclab/simd.hpp"

namespace gmclab::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void lower_tri_matvec(const double* packed, std::size_t n, const double* z, double* out) {
  const double* row = packed;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dot(row, z, i + 1);
    row += i + 1;
  }
}

void exp_density(const double* u, std::size_t n, double gamma, double shift, double scale, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * std::exp(gamma * u[i] - shift);
}

void scale_complex(double* data, const double* factor, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    data[2 * k] *= factor[k];
    data[2 * k + 1] *= factor[k];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot, lower_tri_matvec, exp_density, scale_complex};
  return table;
}

}  // namespace gmclab::simd
