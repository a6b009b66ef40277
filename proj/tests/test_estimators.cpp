#include <doctest.h>

#include "baglab/estimators.hpp"

using namespace baglab;

namespace {

Dataset make(Index n, double gamma, std::uint64_t seed) {
  const AspectConfig cfg{n, gamma};
  return sample_dataset(cfg, build_covariance(CovarianceKind::Isotropic, cfg.d()), RandomSignal{1.0}, 1.0, seed);
}

}  // namespace

TEST_CASE("min-norm on simple designs") {
  const Matrix I = Matrix::Identity(4, 4);
  const Vector y = Vector::LinSpaced(4, 1.0, 4.0);
  CHECK((min_norm_ls(I, y) - y).norm() < 1e-14);
  Matrix X(1, 2);
  X << 1.0, 0.0;
  const Vector b = min_norm_ls(X, Vector::Constant(1, 2.0));
  CHECK(b[0] == doctest::Approx(2.0));
  CHECK(b[1] == 0.0);
}

TEST_CASE("min-norm interpolates and lies in the row space") {
  const auto ds = make(30, 2.0, 3);
  const Matrix X = ds.X;
  const Vector b = min_norm_ls(X, ds.y);
  CHECK((ds.y - X * b).norm() < 1e-8);
  Eigen::FullPivLU<Matrix> lu(X);
  const Matrix N = lu.kernel();
  CHECK((N.transpose() * b).norm() < 1e-10);
}

TEST_CASE("ridge shrinks and approaches min-norm") {
  const auto ds = make(40, 0.5, 4);
  const Matrix X = ds.X;
  double prev = 1e300;
  for (double lambda : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double nb = ridge(X, ds.y, lambda).norm();
    CHECK(nb < prev);
    prev = nb;
  }
  CHECK((ridge(X, ds.y, 1e-10) - min_norm_ls(X, ds.y)).norm() < 1e-6);
  const auto wide = make(20, 2.0, 5);
  const Matrix Xw = wide.X;
  CHECK((ridge(Xw, wide.y, 1e-10) - min_norm_ls(Xw, wide.y)).norm() < 1e-6);
  CHECK((ridge(Xw, wide.y, 0.0) - min_norm_ls(Xw, wide.y)).norm() < 1e-12);
}

TEST_CASE("ridge scalar case") {
  const Matrix X = Matrix::Constant(1, 1, 1.0);
  CHECK(ridge(X, Vector::Constant(1, 2.0), 1.0)[0] == doctest::Approx(1.0));
}

TEST_CASE("primal and dual ridge forms agree") {
  const auto ds = make(25, 1.6, 6);
  const Matrix X = ds.X;
  const double lambda = 0.7;
  const Index n = X.rows(), d = X.cols();
  const Matrix G = X.transpose() * X + n * lambda * Matrix::Identity(d, d);
  const Vector primal = G.ldlt().solve(X.transpose() * ds.y);
  CHECK((ridge(X, ds.y, lambda) - primal).norm() < 1e-10);
}

TEST_CASE("sketched estimator identities") {
  const auto ds = make(40, 0.5, 7);
  const Matrix X = ds.X;
  CHECK((sketched_ls(ds, MultiplierVector(Vector::Ones(40))) - min_norm_ls(X, ds.y)).norm() < 1e-10);
  const auto w = draw_multipliers(MultiplierScheme::multinomial(), 40, 1);
  CHECK((sketched_ls(ds, MultiplierVector(3.5 * w.values())) - sketched_ls(ds, w)).norm() < 1e-10);
  const auto jk = draw_multipliers(MultiplierScheme::jackknife(), 40, 2);
  Index dropped = 0;
  while (jk[dropped] != 0.0) ++dropped;
  Matrix Xd(39, X.cols());
  Vector yd(39);
  for (Index i = 0, r = 0; i < 40; ++i)
    if (i != dropped) {
      Xd.row(r) = X.row(i);
      yd[r++] = ds.y[i];
    }
  CHECK((sketched_ls(ds, jk) - min_norm_ls(Xd, yd)).norm() < 1e-10);
}

TEST_CASE("bagged averages") {
  const auto ds = make(30, 1.5, 8);
  const auto one = bagged_ls(ds, MultiplierScheme::bernoulli(0.5), 1, 3);
  CHECK(one.B == 1);
  CHECK((one.average - one.per_bag[0]).norm() < 1e-14);
  CHECK((one.per_bag[0] - sketched_ls(ds, one.weights[0])).norm() < 1e-12);
  const auto ones = bagged_ls(ds, MultiplierScheme::ones(), 4, 3);
  const Matrix X = ds.X;
  CHECK((ones.average - min_norm_ls(X, ds.y)).norm() < 1e-10);
  const auto many = bagged_ls(ds, MultiplierScheme::multinomial(), 5, 3);
  Vector mean = Vector::Zero(ds.d());
  for (const auto& b : many.per_bag) mean += b;
  CHECK((many.average - mean / 5.0).norm() < 1e-12);
}
