#pragma once

#include <optional>
#include <span>
#include <vector>

#include "baglab/model_gen.hpp"
#include "baglab/multipliers.hpp"
#include "baglab/risk_decomposition.hpp"
#include "baglab/types.hpp"

namespace baglab {

// Sketched min-norm fits written in observation space. For a bag with
// multipliers w the fit is beta_k = X^T C_k y, where C_k is supported on the
// rows with w > 0:
//   m <= d:  C_k = K_S^{-1}                    (K = X X^T, exact interpolation)
//   m >  d:  C_k = W X_S G^{-2} X_S^T W,       G = X_S^T W X_S
// and the bagged fit uses C = mean_k C_k. Factorizations are Cholesky; a bag
// whose Gram matrix is numerically singular falls back to an SVD with the
// usual relative cutoff.
struct BagRepresenter {
  std::vector<Index> support;
  Matrix block;  // C_k restricted to support x support
  bool svd_fallback = false;
};

class KernelBagger {
 public:
  KernelBagger(const RowMatrix& X, const CovarianceModel& cov, double tol = 1e-10);

  BagRepresenter representer(const MultiplierVector& w) const;

  // Dense n x n average of the bag representers.
  Matrix averaged(std::span<const MultiplierVector> bags) const;

  Vector coefficients(const BagRepresenter& rep, const Vector& y) const;
  Vector coefficients(const Matrix& C, const Vector& y) const;

  // Exact conditional bias and variance of beta_hat = X^T C y.
  RiskDecomposition risk(const Matrix& C, const Vector& beta, double sigma) const;

  // Ridge fit (X^T X + n lambda I)^{-1} X^T y; lambda = 0 gives the min-norm fit.
  Vector ridge(double lambda, const Vector& y) const;

  // X^T C, the d x n smoother.
  Matrix smoother(const Matrix& C) const;

  const Matrix& gram() const;

 private:
  const Matrix& sigma_gram() const;

  const RowMatrix& X_;
  const CovarianceModel& cov_;
  double tol_;
  mutable std::optional<Matrix> gram_;
  mutable std::optional<Matrix> sigma_gram_;
};

}  // namespace baglab
