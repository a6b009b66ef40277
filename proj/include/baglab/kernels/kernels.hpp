#pragma once

#include <cstddef>

// Low-level data-parallel kernels used by the hot paths (Gram matrices,
// weighted reductions, spectral quadrature). Each kernel exists as a
// portable scalar reference and as SIMD variants; the variant is chosen once
// at runtime from the CPU feature set.

namespace baglab::kernels {

enum class Isa { Scalar, Avx2, Neon };

// Sums over a discrete measure {(t_j, p_j)} at a point x:
//   m0   = sum p / (1 + x t)
//   m1   = sum p t / (1 + x t)
//   q    = sum p / (1 + x t)^2
//   t1q  = sum p t / (1 + x t)^2
//   t2q  = sum p t^2 / (1 + x t)^2
struct ResolventMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double q = 0.0;
  double t1q = 0.0;
  double t2q = 0.0;
};

struct KernelTable {
  Isa isa;
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*weighted_dot)(const double* a, const double* b, const double* w, std::size_t n);
  double (*weighted_sumsq)(const double* a, const double* w, std::size_t n);

  // y[i] = s[i] * x[i]
  void (*scale)(const double* x, const double* s, double* y, std::size_t n);

  // Lower triangle (j <= i) of out = X diag(w) X^T for a row-major X with
  // `rows` rows, `cols` columns and leading dimension `ld`. w may be null,
  // meaning the identity. out is row-major with leading dimension `ldo`.
  void (*gram_lower)(const double* x, std::size_t rows, std::size_t cols, std::size_t ld,
                     const double* w, double* out, std::size_t ldo);

  void (*resolvent_moments)(const double* atoms, const double* weights, std::size_t n, double x,
                            ResolventMoments* out);
};

const KernelTable& scalar_table();

// Null when the variant is not compiled in or not supported by this CPU.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Chosen on first call: the best supported
// SIMD variant, unless BAGLAB_FORCE_SCALAR is set in the environment.
const KernelTable& active();

const char* isa_name(Isa isa);

}  // namespace baglab::kernels
