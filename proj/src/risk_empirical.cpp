#include "baglab/risk_empirical.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "baglab/bagging_engine.hpp"
#include "baglab/errors.hpp"
#include "baglab/kernels/kernels.hpp"
#include "baglab/rng.hpp"

namespace baglab {

LinearSmoother smoother_of(const BaggedFit& fit, const Dataset& ds, double tol) {
  KernelBagger bagger(ds.X, ds.covariance, tol);
  const Matrix C = bagger.averaged(fit.weights);
  return {bagger.smoother(C), "bagged(B=" + std::to_string(fit.B) + ")"};
}

RiskDecomposition conditional_risk(const LinearSmoother& smoother, const RowMatrix& X,
                                   const Vector& beta, const CovarianceModel& cov, double sigma) {
  const Matrix& A = smoother.A;
  if (A.rows() != X.cols() || A.cols() != X.rows() || beta.size() != X.cols() ||
      cov.dim() != X.cols())
    throw InvalidArgument("conditional_risk: inconsistent dimensions");
  const auto& k = kernels::active();
  const std::vector<double>& lambda = cov.eigenvalues();
  const Vector e = A * (X * beta) - beta;
  const double bias = k.weighted_sumsq(e.data(), lambda.data(), static_cast<std::size_t>(e.size()));
  double trace = 0.0;
  for (Index j = 0; j < A.cols(); ++j)
    trace += k.weighted_sumsq(A.col(j).data(), lambda.data(), static_cast<std::size_t>(A.rows()));
  return RiskDecomposition::from_parts(bias, sigma * sigma * trace);
}

RiskDecomposition lemma_decomposition(const BaggedFit& fit, const Dataset& ds, double tol) {
  if (fit.weights.empty()) throw InvalidArgument("lemma_decomposition needs the per-bag multipliers");
  const Index n = ds.n();
  const Index d = ds.d();
  const double nn = static_cast<double>(n);
  const Vector lambda = ds.covariance.diagonal();

  std::vector<Vector> projected;  // Pi_k beta
  std::vector<Matrix> F;          // Sigma_k^+ X^T S_k^2 / n
  for (const auto& w : fit.weights) {
    const Matrix M = w.values().cwiseSqrt().asDiagonal() * ds.X;
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol * (sv.size() ? sv[0] : 0.0);
    Index r = 0;
    while (r < sv.size() && sv[r] > cutoff) ++r;
    const Matrix V = svd.matrixV().leftCols(r);
    const Vector s2 = sv.head(r).array().square();

    // Sigma_k = V diag(s^2 / n) V^T restricted to its range.
    const Matrix pinv = V * (nn * s2.cwiseInverse()).asDiagonal() * V.transpose();
    const Matrix sigma_hat = V * (s2 / nn).asDiagonal() * V.transpose();
    const Matrix Pi = Matrix::Identity(d, d) - pinv * sigma_hat;
    projected.push_back(Pi * ds.beta);
    F.push_back(pinv * (ds.X.transpose() * w.values().asDiagonal()) / nn);
  }

  const auto B = static_cast<double>(fit.weights.size());
  double bias = 0.0;
  double trace = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    for (std::size_t l = 0; l < F.size(); ++l) {
      bias += projected[k].dot(lambda.asDiagonal() * projected[l]);
      trace += (lambda.asDiagonal() * F[k]).cwiseProduct(F[l]).sum();
    }
  }
  return RiskDecomposition::from_parts(bias / (B * B), ds.sigma * ds.sigma * trace / (B * B));
}

BaggedEvaluation evaluate_bagged(const Dataset& ds, std::span<const MultiplierVector> bags,
                                 double tol) {
  KernelBagger bagger(ds.X, ds.covariance, tol);
  const Matrix C = bagger.averaged(bags);
  return {bagger.risk(C, ds.beta, ds.sigma), bagger.coefficients(C, ds.y)};
}

namespace {
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return out;
}
}  // namespace

MonteCarloRisk monte_carlo_risk(const FitProcedure& fit, const Dataset& ds, int n_noise, int n_test,
                                std::uint64_t seed) {
  if (n_noise < 2 || n_test < 2) throw InvalidArgument("monte_carlo_risk needs n_noise, n_test >= 2");
  const Index d = ds.d();
  std::vector<Vector> fits;
  fits.reserve(static_cast<std::size_t>(n_noise));
  Vector mean_fit = Vector::Zero(d);
  for (int j = 0; j < n_noise; ++j) {
    const Dataset refit = resample_noise(ds, derive_seed(seed, 2 * static_cast<std::uint64_t>(j)));
    fits.push_back(fit(refit.y));
    mean_fit += fits.back();
  }
  mean_fit /= static_cast<double>(n_noise);

  Vector root(d);
  for (Index i = 0; i < d; ++i) root[i] = std::sqrt(ds.covariance.eigenvalues()[static_cast<std::size_t>(i)]);

  std::vector<double> loss(static_cast<std::size_t>(n_noise)), spread(static_cast<std::size_t>(n_noise));
  Vector x(d);
  for (int j = 0; j < n_noise; ++j) {
    Rng rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(j) + 1));
    const Vector err = fits[static_cast<std::size_t>(j)] - ds.beta;
    const Vector dev = fits[static_cast<std::size_t>(j)] - mean_fit;
    double l = 0.0, s = 0.0;
    for (int t = 0; t < n_test; ++t) {
      for (Index i = 0; i < d; ++i) x[i] = root[i] * rng.normal();
      const double a = x.dot(err);
      const double b = x.dot(dev);
      l += a * a;
      s += b * b;
    }
    loss[static_cast<std::size_t>(j)] = l / n_test;
    spread[static_cast<std::size_t>(j)] = s / n_test;
  }
  const MeanSd L = mean_sd(loss);
  const MeanSd S = mean_sd(spread);
  const double correction = static_cast<double>(n_noise) / (n_noise - 1);

  MonteCarloRisk out;
  out.risk = L.mean;
  out.risk_se = L.sd / std::sqrt(static_cast<double>(n_noise));
  out.variance = S.mean * correction;
  out.variance_se = S.sd * correction / std::sqrt(static_cast<double>(n_noise));
  out.bias = out.risk - out.variance;
  return out;
}

double training_error(const Vector& beta_hat, const RowMatrix& X, const Vector& y) {
  if (X.cols() != beta_hat.size() || X.rows() != y.size())
    throw InvalidArgument("training_error: inconsistent dimensions");
  return (y - X * beta_hat).squaredNorm() / static_cast<double>(y.size());
}

double adversarial_risk(double norm_beta_hat, double risk, double sigma, double delta) {
  if (norm_beta_hat < 0.0 || risk < 0.0 || sigma < 0.0 || delta < 0.0)
    throw InvalidArgument("adversarial_risk inputs must be nonnegative");
  const double c = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  return risk + delta * delta * norm_beta_hat * norm_beta_hat +
         c * delta * norm_beta_hat * std::sqrt(sigma * sigma + risk);
}

double l2_norm_sq(const Vector& beta_hat) { return beta_hat.squaredNorm(); }

}  // namespace baglab
