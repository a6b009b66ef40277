#include "baglab/kernels/kernels.hpp"
#include "variants.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <vector>

namespace baglab::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot_neon(const double* a, const double* b, const double* w, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t t0 = vmulq_f64(vld1q_f64(a + i), vld1q_f64(w + i));
    float64x2_t t1 = vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(w + i + 2));
    acc0 = vfmaq_f64(acc0, t0, vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, t1, vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

double weighted_sumsq_neon(const double* a, const double* w, std::size_t n) {
  return weighted_dot_neon(a, a, w, n);
}

void scale_neon(const double* x, const double* s, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(s + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = s[i] * x[i];
}

void gram_lower_neon(const double* x, std::size_t rows, std::size_t cols, std::size_t ld,
                     const double* w, double* out, std::size_t ldo) {
  std::vector<double> buf(w ? cols : 0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* xi = x + i * ld;
    if (w) {
      scale_neon(xi, w, buf.data(), cols);
      xi = buf.data();
    }
    for (std::size_t j = 0; j <= i; ++j) out[i * ldo + j] = dot_neon(xi, x + j * ld, cols);
  }
}

void resolvent_moments_neon(const double* atoms, const double* weights, std::size_t n, double x,
                            ResolventMoments* out) {
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t m0 = vdupq_n_f64(0.0), m1 = m0, q = m0, t1q = m0, t2q = m0;
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t t = vld1q_f64(atoms + j);
    const float64x2_t p = vld1q_f64(weights + j);
    const float64x2_t inv = vdivq_f64(one, vfmaq_n_f64(one, t, x));
    const float64x2_t pinv = vmulq_f64(p, inv);
    const float64x2_t pinv2 = vmulq_f64(pinv, inv);
    const float64x2_t tpinv2 = vmulq_f64(t, pinv2);
    m0 = vaddq_f64(m0, pinv);
    m1 = vfmaq_f64(m1, t, pinv);
    q = vaddq_f64(q, pinv2);
    t1q = vaddq_f64(t1q, tpinv2);
    t2q = vfmaq_f64(t2q, t, tpinv2);
  }
  ResolventMoments r{vaddvq_f64(m0), vaddvq_f64(m1), vaddvq_f64(q), vaddvq_f64(t1q),
                     vaddvq_f64(t2q)};
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

const KernelTable* compiled_neon_table() {
  static const KernelTable table{
      Isa::Neon,  "neon",          dot_neon, weighted_dot_neon, weighted_sumsq_neon,
      scale_neon, gram_lower_neon, resolvent_moments_neon,
  };
  return &table;
}

}  // namespace baglab::kernels

#else

namespace baglab::kernels {
const KernelTable* compiled_neon_table() { return nullptr; }
}  // namespace baglab::kernels

#endif
