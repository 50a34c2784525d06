// Built with -mavx2 -mfma. Only intrinsics and plain loops live here: an
// inline std template instantiated in this TU could be picked by the linker
// for the whole program and then crash on a CPU without AVX2.
#include <immintrin.h>

#include "gmclab/simd.hpp"

namespace gmclab::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  if (i + 4 <= n) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void lower_tri_matvec(const double* packed, std::size_t n, const double* z, double* out) {
  const double* row = packed;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dot(row, z, i + 1);
    row += i + 1;
  }
}

// exp(x) = 2^k exp(r), r = x - k ln2 with a two-constant ln2 so r is exact to
// ~1e-20; |r| <= ln2/2 and a degree-13 Taylor polynomial is below 1 ulp there.
inline __m256d exp4(__m256d x) {
  const __m256d lo_clamp = _mm256_set1_pd(-708.0);
  const __m256d hi_clamp = _mm256_set1_pd(709.0);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_clamp), hi_clamp);
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(1.90821492927058770002e-10), r);

  static const double coef[14] = {1.0,
                                  1.0,
                                  1.0 / 2,
                                  1.0 / 6,
                                  1.0 / 24,
                                  1.0 / 120,
                                  1.0 / 720,
                                  1.0 / 5040,
                                  1.0 / 40320,
                                  1.0 / 362880,
                                  1.0 / 3628800,
                                  1.0 / 39916800,
                                  1.0 / 479001600,
                                  1.0 / 6227020800.0};
  __m256d p = _mm256_set1_pd(coef[13]);
  for (int j = 12; j >= 0; --j) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(coef[j]));

  // 2^k through the exponent field: (k + 1023 + 2^52) carries k+1023 in its
  // low mantissa bits.
  const __m256d biased = _mm256_add_pd(k, _mm256_set1_pd(1023.0 + 4503599627370496.0));
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

void exp_density(const double* u, std::size_t n, double gamma, double shift, double scale, double* out) {
  const __m256d g = _mm256_set1_pd(gamma);
  const __m256d s = _mm256_set1_pd(shift);
  const __m256d c = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // unfused on purpose: the argument must round exactly like the scalar path
    const __m256d x = _mm256_sub_pd(_mm256_mul_pd(g, _mm256_loadu_pd(u + i)), s);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(c, exp4(x)));
  }
  if (i < n) {
    double tmp[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = i; j < n; ++j) tmp[j - i] = u[j];
    const __m256d x = _mm256_sub_pd(_mm256_mul_pd(g, _mm256_loadu_pd(tmp)), s);
    _mm256_storeu_pd(tmp, _mm256_mul_pd(c, exp4(x)));
    for (std::size_t j = i; j < n; ++j) out[j] = tmp[j - i];
  }
}

void scale_complex(double* data, const double* factor, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d f = _mm256_set_pd(factor[k + 1], factor[k + 1], factor[k], factor[k]);
    _mm256_storeu_pd(data + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(data + 2 * k), f));
  }
  for (; k < n; ++k) {
    data[2 * k] *= factor[k];
    data[2 * k + 1] *= factor[k];
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", dot, lower_tri_matvec, exp_density, scale_complex};
  return table;
}

}  // namespace gmclab::simd
