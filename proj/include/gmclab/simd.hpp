#pragma once

#include <cstddef>

namespace gmclab::simd {

// Hot inner loops, one function pointer per kernel. The scalar table is the
// reference; the AVX2 table must agree with it to rounding.
struct KernelTable {
  const char* name;
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out = L z for a lower triangle packed row-major (row i holds i+1 entries
  // starting at offset i(i+1)/2)
  void (*lower_tri_matvec)(const double* packed, std::size_t n, const double* z, double* out);
  // out[i] = scale * exp(gamma*u[i] - shift)
  void (*exp_density)(const double* u, std::size_t n, double gamma, double shift, double scale, double* out);
  // data holds n interleaved complex numbers; multiply number k by factor[k]
  void (*scale_complex)(double* data, const double* factor, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels();

// Best table for this machine. GMCLAB_SIMD=scalar in the environment forces
// the reference path.
const KernelTable& kernels();

}  // namespace gmclab::simd
