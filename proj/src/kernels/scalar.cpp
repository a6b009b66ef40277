#include "baglab/kernels/kernels.hpp"
#include "variants.hpp"

namespace baglab::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

double weighted_sumsq_scalar(const double* a, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * a[i];
  return s;
}

void scale_scalar(const double* x, const double* s, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = s[i] * x[i];
}

void gram_lower_scalar(const double* x, std::size_t rows, std::size_t cols, std::size_t ld,
                       const double* w, double* out, std::size_t ldo) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* xi = x + i * ld;
    for (std::size_t j = 0; j <= i; ++j) {
      const double* xj = x + j * ld;
      out[i * ldo + j] = w ? weighted_dot_scalar(xi, xj, w, cols) : dot_scalar(xi, xj, cols);
    }
  }
}

void resolvent_moments_scalar(const double* atoms, const double* weights, std::size_t n, double x,
                              ResolventMoments* out) {
  ResolventMoments r;
  for (std::size_t j = 0; j < n; ++j) {
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

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::Scalar,           "scalar",         dot_scalar,
      weighted_dot_scalar,   weighted_sumsq_scalar, scale_scalar,
      gram_lower_scalar,     resolvent_moments_scalar,
  };
  return table;
}

}  // namespace baglab::kernels
