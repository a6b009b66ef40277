#include "baglab/estimators.hpp"

#include <cmath>

#include "baglab/errors.hpp"

namespace baglab {

namespace {

void require_finite(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y) {
  if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("non-finite entries in design or response");
  if (X.rows() != y.size())
    throw InvalidArgument("design has " + std::to_string(X.rows()) + " rows but response has " +
                          std::to_string(y.size()) + " entries");
}

// Rows of (sqrt(w) X, sqrt(w) y) with w > 0.
void gather_sketch(const RowMatrix& X, const Vector& y, const MultiplierVector& w, Matrix& Xs,
                   Vector& ys) {
  const auto rows = w.support();
  Xs.resize(static_cast<Index>(rows.size()), X.cols());
  ys.resize(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double s = std::sqrt(w[rows[k]]);
    Xs.row(static_cast<Index>(k)) = s * X.row(rows[k]);
    ys[static_cast<Index>(k)] = s * y[rows[k]];
  }
}

}  // namespace

CoefficientVector min_norm_ls(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                              double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("rank tolerance must be positive");
  require_finite(X, y);
  if (X.rows() == 0) return Vector::Zero(X.cols());
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  return svd.solve(y);
}

CoefficientVector ridge(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& y,
                        double lambda, double tol) {
  if (!(lambda >= 0.0)) throw InvalidArgument("ridge penalty must be nonnegative");
  if (lambda == 0.0) return min_norm_ls(X, y, tol);
  require_finite(X, y);
  const Index n = X.rows();
  const double shift = static_cast<double>(n) * lambda;
  if (n < X.cols()) {
    // Dual form X^T (X X^T + n lambda I)^{-1} y.
    Matrix K = X * X.transpose();
    K.diagonal().array() += shift;
    return X.transpose() * K.llt().solve(y);
  }
  Matrix G = X.transpose() * X;
  G.diagonal().array() += shift;
  return G.llt().solve(X.transpose() * y);
}

CoefficientVector sketched_ls(const RowMatrix& X, const Vector& y, const MultiplierVector& w,
                              double tol) {
  if (w.size() != X.rows())
    throw InvalidArgument("multiplier length does not match the number of rows");
  Matrix Xs;
  Vector ys;
  gather_sketch(X, y, w, Xs, ys);
  return min_norm_ls(Xs, ys, tol);
}

CoefficientVector sketched_ls(const Dataset& ds, const MultiplierVector& w, double tol) {
  return sketched_ls(ds.X, ds.y, w, tol);
}

BaggedFit bagged_ls_with_weights(const RowMatrix& X, const Vector& y,
                                 std::vector<MultiplierVector> weights, double tol) {
  if (weights.empty()) throw InvalidArgument("bagging needs at least one bag");
  BaggedFit fit;
  fit.B = static_cast<int>(weights.size());
  fit.average = Vector::Zero(X.cols());
  fit.per_bag.reserve(weights.size());
  for (const auto& w : weights) {
    fit.per_bag.push_back(sketched_ls(X, y, w, tol));
    fit.average += fit.per_bag.back();
  }
  fit.average /= static_cast<double>(fit.B);
  fit.weights = std::move(weights);
  return fit;
}

BaggedFit bagged_ls(const Dataset& ds, const MultiplierScheme& scheme, int B, std::uint64_t seed,
                    double tol) {
  return bagged_ls_with_weights(ds.X, ds.y, draw_bags(scheme, ds.n(), B, seed), tol);
}

}  // namespace baglab
