#pragma once

#include <cstdint>
#include <vector>

#include "baglab/model_gen.hpp"
#include "baglab/multipliers.hpp"
#include "baglab/types.hpp"

namespace baglab {

// Singular values at or below tol * sigma_max are treated as zero.
inline constexpr double kDefaultRankTol = 1e-10;

using CoefficientVector = Vector;

CoefficientVector min_norm_ls(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                              double tol = kDefaultRankTol);

// Solves (X^T X + n lambda I) b = X^T y; lambda = 0 falls back to min_norm_ls.
CoefficientVector ridge(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                        double lambda, double tol = kDefaultRankTol);

// Min-norm fit on (S X, S y) with S = diag(sqrt(w)); zero-weight rows are
// dropped before factorizing.
CoefficientVector sketched_ls(const RowMatrix& X, const Vector& y, const MultiplierVector& w,
                              double tol = kDefaultRankTol);
CoefficientVector sketched_ls(const Dataset& ds, const MultiplierVector& w,
                              double tol = kDefaultRankTol);

struct BaggedFit {
  std::vector<CoefficientVector> per_bag;
  CoefficientVector average;
  std::vector<MultiplierVector> weights;
  int B = 0;
};

BaggedFit bagged_ls(const Dataset& ds, const MultiplierScheme& scheme, int B, std::uint64_t seed,
                    double tol = kDefaultRankTol);
BaggedFit bagged_ls_with_weights(const RowMatrix& X, const Vector& y,
                                 std::vector<MultiplierVector> weights,
                                 double tol = kDefaultRankTol);

}  // namespace baglab
