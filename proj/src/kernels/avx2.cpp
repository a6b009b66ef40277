#include "baglab/kernels/kernels.hpp"
#include "variants.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <vector>

#define BAGLAB_AVX2 __attribute__((target("avx2,fma")))

namespace baglab::kernels {
namespace {

BAGLAB_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

BAGLAB_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

BAGLAB_AVX2 double weighted_dot_avx2(const double* a, const double* b, const double* w,
                                     std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d t0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(w + i));
    __m256d t1 = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(w + i + 4));
    acc0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(t1, _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d t0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(w + i));
    acc0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

BAGLAB_AVX2 double weighted_sumsq_avx2(const double* a, const double* w, std::size_t n) {
  return weighted_dot_avx2(a, a, w, n);
}

BAGLAB_AVX2 void scale_avx2(const double* x, const double* s, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = s[i] * x[i];
}

// Two rows of A against four rows of B: eight dot products sharing loads.
BAGLAB_AVX2 void block_2x4(const double* a0, const double* a1, const double* b0, const double* b1,
                           const double* b2, const double* b3, std::size_t n, double r[2][4]) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c02 = _mm256_setzero_pd(), c03 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c12 = _mm256_setzero_pd(), c13 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x0 = _mm256_loadu_pd(a0 + k);
    const __m256d x1 = _mm256_loadu_pd(a1 + k);
    __m256d y = _mm256_loadu_pd(b0 + k);
    c00 = _mm256_fmadd_pd(x0, y, c00);
    c10 = _mm256_fmadd_pd(x1, y, c10);
    y = _mm256_loadu_pd(b1 + k);
    c01 = _mm256_fmadd_pd(x0, y, c01);
    c11 = _mm256_fmadd_pd(x1, y, c11);
    y = _mm256_loadu_pd(b2 + k);
    c02 = _mm256_fmadd_pd(x0, y, c02);
    c12 = _mm256_fmadd_pd(x1, y, c12);
    y = _mm256_loadu_pd(b3 + k);
    c03 = _mm256_fmadd_pd(x0, y, c03);
    c13 = _mm256_fmadd_pd(x1, y, c13);
  }
  r[0][0] = hsum(c00); r[0][1] = hsum(c01); r[0][2] = hsum(c02); r[0][3] = hsum(c03);
  r[1][0] = hsum(c10); r[1][1] = hsum(c11); r[1][2] = hsum(c12); r[1][3] = hsum(c13);
  for (; k < n; ++k) {
    r[0][0] += a0[k] * b0[k]; r[0][1] += a0[k] * b1[k];
    r[0][2] += a0[k] * b2[k]; r[0][3] += a0[k] * b3[k];
    r[1][0] += a1[k] * b0[k]; r[1][1] += a1[k] * b1[k];
    r[1][2] += a1[k] * b2[k]; r[1][3] += a1[k] * b3[k];
  }
}

BAGLAB_AVX2 void gram_lower_avx2(const double* x, std::size_t rows, std::size_t cols,
                                 std::size_t ld, const double* w, double* out, std::size_t ldo) {
  std::vector<double> buf;
  if (w) buf.resize(2 * cols);
  for (std::size_t i0 = 0; i0 < rows; i0 += 2) {
    const std::size_t ni = std::min<std::size_t>(2, rows - i0);
    const double* a[2] = {x + i0 * ld, x + (i0 + ni - 1) * ld};
    if (w) {
      for (std::size_t a_i = 0; a_i < ni; ++a_i) {
        scale_avx2(x + (i0 + a_i) * ld, w, buf.data() + a_i * cols, cols);
        a[a_i] = buf.data() + a_i * cols;
      }
      if (ni == 1) a[1] = a[0];
    }
    const std::size_t jend = i0 + ni;
    for (std::size_t j0 = 0; j0 < jend; j0 += 4) {
      const std::size_t nj = std::min<std::size_t>(4, jend - j0);
      double r[2][4];
      if (ni == 2 && nj == 4) {
        block_2x4(a[0], a[1], x + j0 * ld, x + (j0 + 1) * ld, x + (j0 + 2) * ld,
                  x + (j0 + 3) * ld, cols, r);
      } else {
        for (std::size_t p = 0; p < ni; ++p)
          for (std::size_t q = 0; q < nj; ++q) r[p][q] = dot_avx2(a[p], x + (j0 + q) * ld, cols);
      }
      for (std::size_t p = 0; p < ni; ++p)
        for (std::size_t q = 0; q < nj; ++q)
          if (j0 + q <= i0 + p) out[(i0 + p) * ldo + j0 + q] = r[p][q];
    }
  }
}

BAGLAB_AVX2 void resolvent_moments_avx2(const double* atoms, const double* weights, std::size_t n,
                                        double x, ResolventMoments* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vx = _mm256_set1_pd(x);
  __m256d m0 = _mm256_setzero_pd(), m1 = _mm256_setzero_pd(), q = _mm256_setzero_pd();
  __m256d t1q = _mm256_setzero_pd(), t2q = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d t = _mm256_loadu_pd(atoms + j);
    const __m256d p = _mm256_loadu_pd(weights + j);
    const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(vx, t, one));
    const __m256d pinv = _mm256_mul_pd(p, inv);
    const __m256d pinv2 = _mm256_mul_pd(pinv, inv);
    const __m256d tpinv2 = _mm256_mul_pd(t, pinv2);
    m0 = _mm256_add_pd(m0, pinv);
    m1 = _mm256_fmadd_pd(t, pinv, m1);
    q = _mm256_add_pd(q, pinv2);
    t1q = _mm256_add_pd(t1q, tpinv2);
    t2q = _mm256_fmadd_pd(t, tpinv2, t2q);
  }
  ResolventMoments r{hsum(m0), hsum(m1), hsum(q), hsum(t1q), hsum(t2q)};
  for (; j < n; ++j) {
    const double t = atoms[j];
    const double p = weights[j];
    const double inv = 1.0 / (1.0 + x * t);
    const double inv2 = inv * inv;
    r.m0 += p * inv;
    r.m1 += p * t * inv;
    r.q += p * inv2;
    r.t1q += p * t * inv2;
    r.t2q += p * t * t * inv2;
  }
  *out = r;
}

}  // namespace

const KernelTable* compiled_avx2_table() {
  static const KernelTable table{
      Isa::Avx2,         "avx2",          dot_avx2,        weighted_dot_avx2, weighted_sumsq_avx2,
      scale_avx2,        gram_lower_avx2, resolvent_moments_avx2,
  };
  return &table;
}

}  // namespace baglab::kernels

#else

namespace baglab::kernels {
const KernelTable* compiled_avx2_table() { return nullptr; }
}  // namespace baglab::kernels

#endif
