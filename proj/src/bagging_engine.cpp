#include "baglab/bagging_engine.hpp"

#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/estimators.hpp"
#include "baglab/kernels/kernels.hpp"

namespace baglab {

namespace {

constexpr double kMinRcond = 1e-12;

void symmetrize_from_upper(Matrix& A) { A.triangularView<Eigen::StrictlyLower>() = A.transpose(); }

// gram_lower writes row-major lower entries; on column-major storage they land
// in the upper triangle.
Matrix gram_of_rows(const double* x, Index rows, Index cols, Index ld, const double* w) {
  Matrix G(rows, rows);
  kernels::active().gram_lower(x, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                               static_cast<std::size_t>(ld), w, G.data(),
                               static_cast<std::size_t>(rows));
  symmetrize_from_upper(G);
  return G;
}

}  // namespace

KernelBagger::KernelBagger(const RowMatrix& X, const CovarianceModel& cov, double tol)
    : X_(X), cov_(cov), tol_(tol) {
  if (cov.dim() != X.cols()) throw InvalidArgument("covariance dimension does not match design");
}

const Matrix& KernelBagger::gram() const {
  if (!gram_) gram_ = gram_of_rows(X_.data(), X_.rows(), X_.cols(), X_.cols(), nullptr);
  return *gram_;
}

const Matrix& KernelBagger::sigma_gram() const {
  if (cov_.isotropic()) return gram();
  if (!sigma_gram_)
    sigma_gram_ = gram_of_rows(X_.data(), X_.rows(), X_.cols(), X_.cols(), cov_.eigenvalues().data());
  return *sigma_gram_;
}

BagRepresenter KernelBagger::representer(const MultiplierVector& w) const {
  if (w.size() != X_.rows()) throw InvalidArgument("multiplier length does not match design");
  BagRepresenter rep;
  rep.support = w.support();
  const Index m = static_cast<Index>(rep.support.size());
  const Index d = X_.cols();
  if (m == 0) return rep;

  Vector ws(m);
  for (Index k = 0; k < m; ++k) ws[k] = w[rep.support[static_cast<std::size_t>(k)]];

  if (m <= d) {
    const Matrix& K = gram();
    Matrix Ks(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) Ks(a, b) = K(rep.support[a], rep.support[b]);
    Eigen::LLT<Matrix> llt(Ks);
    if (llt.info() == Eigen::Success && llt.rcond() >= kMinRcond) {
      rep.block = llt.solve(Matrix::Identity(m, m));
      return rep;
    }
  } else {
    RowMatrix Xt(d, m);
    for (Index k = 0; k < m; ++k) Xt.col(k) = X_.row(rep.support[static_cast<std::size_t>(k)]).transpose();
    Matrix G = gram_of_rows(Xt.data(), d, m, m, ws.data());
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() == Eigen::Success && llt.rcond() >= kMinRcond) {
      Matrix Tt = llt.solve(Matrix(Xt));  // G^{-1} X_S^T
      rep.block.noalias() = Tt.transpose() * Tt;
      rep.block = ws.asDiagonal() * rep.block * ws.asDiagonal();
      return rep;
    }
  }

  // Singular Gram: C_k = sqrt(W) U S^{-2} U^T sqrt(W) from the thin SVD of
  // sqrt(W) X_S, keeping singular values above tol * s_max.
  rep.svd_fallback = true;
  const Vector s = ws.cwiseSqrt();
  Matrix M(m, d);
  for (Index k = 0; k < m; ++k) M.row(k) = s[k] * X_.row(rep.support[static_cast<std::size_t>(k)]);
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double cutoff = tol_ * (sv.size() ? sv[0] : 0.0);
  Index r = 0;
  while (r < sv.size() && sv[r] > cutoff) ++r;
  Matrix U = s.asDiagonal() * svd.matrixU().leftCols(r);
  U = U * sv.head(r).cwiseInverse().asDiagonal();
  rep.block.noalias() = U * U.transpose();
  return rep;
}

Matrix KernelBagger::averaged(std::span<const MultiplierVector> bags) const {
  if (bags.empty()) throw InvalidArgument("bagging needs at least one bag");
  const Index n = X_.rows();
  Matrix C = Matrix::Zero(n, n);
  const double scale = 1.0 / static_cast<double>(bags.size());
  for (const auto& w : bags) {
    const BagRepresenter rep = representer(w);
    const Index m = static_cast<Index>(rep.support.size());
    for (Index b = 0; b < m; ++b) {
      const Index j = rep.support[static_cast<std::size_t>(b)];
      for (Index a = 0; a < m; ++a) C(rep.support[static_cast<std::size_t>(a)], j) += scale * rep.block(a, b);
    }
  }
  return C;
}

Vector KernelBagger::coefficients(const BagRepresenter& rep, const Vector& y) const {
  const Index m = static_cast<Index>(rep.support.size());
  Vector beta = Vector::Zero(X_.cols());
  if (m == 0) return beta;
  Vector ys(m);
  for (Index k = 0; k < m; ++k) ys[k] = y[rep.support[static_cast<std::size_t>(k)]];
  const Vector c = rep.block * ys;
  for (Index k = 0; k < m; ++k) beta += c[k] * X_.row(rep.support[static_cast<std::size_t>(k)]).transpose();
  return beta;
}

Vector KernelBagger::coefficients(const Matrix& C, const Vector& y) const {
  return X_.transpose() * (C * y);
}

Vector KernelBagger::ridge(double lambda, const Vector& y) const {
  if (!(lambda >= 0.0)) throw InvalidArgument("ridge penalty must be nonnegative");
  const Index n = X_.rows();
  if (n > X_.cols()) return baglab::ridge(X_, y, lambda, tol_);
  Matrix K = gram();
  K.diagonal().array() += static_cast<double>(n) * lambda;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success || llt.rcond() < kMinRcond) return baglab::ridge(X_, y, lambda, tol_);
  return X_.transpose() * llt.solve(y);
}

Matrix KernelBagger::smoother(const Matrix& C) const { return X_.transpose() * C; }

RiskDecomposition KernelBagger::risk(const Matrix& C, const Vector& beta, double sigma) const {
  const auto& k = kernels::active();
  const std::vector<double>& lambda = cov_.eigenvalues();
  const auto d = static_cast<std::size_t>(X_.cols());

  const Vector e = X_.transpose() * (C * (X_ * beta)) - beta;
  const double bias = k.weighted_sumsq(e.data(), lambda.data(), d);

  double trace = 0.0;
  if (X_.cols() < X_.rows()) {
    // sum_i lambda_i |row i of X^T C|^2
    const RowMatrix A = X_.transpose() * C;
    for (Index i = 0; i < A.rows(); ++i)
      trace += lambda[static_cast<std::size_t>(i)] *
               k.dot(A.row(i).data(), A.row(i).data(), static_cast<std::size_t>(A.cols()));
  } else {
    // tr(C K_sigma C) = sum_ij C_ij (K_sigma C)_ij for symmetric C
    const Matrix P = sigma_gram() * C;
    trace = k.dot(C.data(), P.data(), static_cast<std::size_t>(C.size()));
  }
  return RiskDecomposition::from_parts(bias, sigma * sigma * trace);
}

}  // namespace baglab
