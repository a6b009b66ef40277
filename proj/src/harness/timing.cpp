#include <algorithm>
#include <chrono>
#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/estimators.hpp"
#include "baglab/harness.hpp"
#include "internal.hpp"

namespace baglab::harness {

namespace detail {

Matrix haar_orthogonal_rows(Index n, Index m, Rng& rng) {
  Matrix G(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const auto& R = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q.topRows(m);
}

std::uint64_t label_hash(const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

// One bagged fit with B bags, each drawn and solved from scratch.
Vector fit_bernoulli(const Dataset& ds, double theta, int B, std::uint64_t seed) {
  const auto scheme = MultiplierScheme::bernoulli(theta);
  Vector avg = Vector::Zero(ds.d());
  for (int k = 0; k < B; ++k)
    avg += sketched_ls(ds, draw_multipliers(scheme, ds.n(), seed, static_cast<std::uint64_t>(k)));
  return avg / B;
}

// Classical bootstrap: n rows drawn with replacement, duplicates kept.
Vector fit_classical(const Dataset& ds, int B, std::uint64_t seed) {
  const Index n = ds.n();
  Vector avg = Vector::Zero(ds.d());
  Matrix Xb(n, ds.d());
  Vector yb(n);
  for (int k = 0; k < B; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    for (Index i = 0; i < n; ++i) {
      const auto idx = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
      Xb.row(i) = ds.X.row(idx);
      yb[i] = ds.y[idx];
    }
    avg += min_norm_ls(Xb, yb);
  }
  return avg / B;
}

Vector fit_orthogonal(const Dataset& ds, double theta, int B, std::uint64_t seed) {
  const Index m = static_cast<Index>(std::ceil(theta * static_cast<double>(ds.n())));
  Vector avg = Vector::Zero(ds.d());
  for (int k = 0; k < B; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const Matrix S = detail::haar_orthogonal_rows(ds.n(), m, rng);
    const Matrix SX = S * ds.X;
    avg += min_norm_ls(SX, S * ds.y);
  }
  return avg / B;
}

double median_ms(const std::function<void()>& fn, int warmup, int runs) {
  for (int i = 0; i < warmup; ++i) fn();
  std::vector<double> ms;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = Clock::now();
    fn();
    ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t h = ms.size() / 2;
  return ms.size() % 2 ? ms[h] : 0.5 * (ms[h - 1] + ms[h]);
}

}  // namespace

Table run_bench(const std::string& name, const BenchOptions& options) {
  if (name != "table1" && name != "table2")
    throw InvalidArgument("unknown benchmark preset '" + name + "' (expected table1 or table2)");
  if (options.runs < 1) throw InvalidArgument("bench needs at least one timed run");
  const bool bagged = name == "table2";
  const int B = bagged ? 10 : 1;
  const double theta = 1.0 - std::exp(-1.0);

  Table table;
  table.meta = {"bench=" + name, "seed=" + std::to_string(options.seed),
                "runs=" + std::to_string(options.runs), "warmup=" + std::to_string(options.warmup)};

  for (const Index n : options.ns) {
    const AspectConfig cfg{n, options.gamma};
    const Dataset ds = sample_dataset(cfg, build_covariance(CovarianceKind::Isotropic, cfg.d()),
                                      RandomSignal{1.0}, 1.0, derive_seed(options.seed, static_cast<std::uint64_t>(n)));
    const std::uint64_t s = derive_seed(options.seed, 7);
    struct Entry {
      std::string label;
      std::function<void()> fn;
    };
    const std::string bern = MultiplierScheme::bernoulli(theta).name();
    std::vector<Entry> entries;
    entries.push_back({bern, [&] { fit_bernoulli(ds, theta, B, s); }});
    if (bagged) {
      entries.push_back({"classical", [&] { fit_classical(ds, B, s); }});
      entries.push_back({"orthogonal", [&] { fit_orthogonal(ds, theta, B, s); }});
    } else {
      entries.push_back({"orthogonal", [&] { fit_orthogonal(ds, theta, B, s); }});
      entries.push_back({"multinomial", [&] { fit_classical(ds, B, s); }});
    }
    for (const auto& e : entries) {
      ResultRow row;
      row.gamma = options.gamma;
      row.theta = theta;
      row.scheme = e.label;
      row.B = B;
      row.n = n;
      row.reps = options.runs;
      row.add_extra("wall_ms", median_ms(e.fn, options.warmup, options.runs));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace baglab::harness
