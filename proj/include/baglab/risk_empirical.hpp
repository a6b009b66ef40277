#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "baglab/estimators.hpp"
#include "baglab/model_gen.hpp"
#include "baglab/risk_decomposition.hpp"
#include "baglab/types.hpp"

namespace baglab {

// beta_hat = A y for a fixed design and fixed multipliers.
struct LinearSmoother {
  Matrix A;  // d x n
  std::string provenance;

  Vector apply(const Vector& y) const { return A * y; }
};

// Smoother of a bagged fit, (1/B) sum_k (X^T S_k^2 X)^+ X^T S_k^2, assembled
// through the observation-space Gram route.
LinearSmoother smoother_of(const BaggedFit& fit, const Dataset& ds, double tol = kDefaultRankTol);

// bias = (A X beta - beta)^T Sigma (A X beta - beta), variance = sigma^2 tr(A^T Sigma A).
RiskDecomposition conditional_risk(const LinearSmoother& smoother, const RowMatrix& X,
                                   const Vector& beta, const CovarianceModel& cov, double sigma);

// Bias and variance of a bagged fit from the per-bag pseudoinverses of
// Sigma_k = X^T S_k^2 X / n and projections Pi_k = I - Sigma_k^+ Sigma_k:
//   B = B^-2 sum_{k,l} beta^T Pi_k Sigma Pi_l beta
//   V = sigma^2 B^-2 sum_{k,l} n^-2 tr(Sigma_k^+ X^T S_k^2 S_l^2 X Sigma_l^+ Sigma)
RiskDecomposition lemma_decomposition(const BaggedFit& fit, const Dataset& ds,
                                      double tol = kDefaultRankTol);

struct BaggedEvaluation {
  RiskDecomposition risk;
  Vector coefficients;
};

// Conditional risk and coefficients of the bagged fit for the given bags
// without forming the d x n smoother.
BaggedEvaluation evaluate_bagged(const Dataset& ds, std::span<const MultiplierVector> bags,
                                 double tol = kDefaultRankTol);

struct MonteCarloRisk {
  double risk = 0.0;
  double risk_se = 0.0;
  double bias = 0.0;  // risk - variance, may dip below zero by sampling error
  double variance = 0.0;
  double variance_se = 0.0;
};

using FitProcedure = std::function<Vector(const Vector& y)>;

// Refits on n_noise fresh noise draws (same X, beta, multipliers) and scores
// each refit on n_test fresh test points.
MonteCarloRisk monte_carlo_risk(const FitProcedure& fit, const Dataset& ds, int n_noise, int n_test,
                                std::uint64_t seed);

// Mean squared residual |y - X beta_hat|^2 / n.
double training_error(const Vector& beta_hat, const RowMatrix& X, const Vector& y);

double adversarial_risk(double norm_beta_hat, double risk, double sigma, double delta);

double l2_norm_sq(const Vector& beta_hat);

}  // namespace baglab
