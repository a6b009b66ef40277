#include "baglab/model_gen.hpp"

#include <algorithm>
#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/rng.hpp"

namespace baglab {

namespace {
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kDesignStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

Vector draw_noise(Index n, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  Vector eps(n);
  for (Index i = 0; i < n; ++i) eps[i] = sigma * rng.normal();
  return eps;
}
}  // namespace

CovarianceKind parse_covariance_kind(const std::string& name) {
  if (name == "isotropic") return CovarianceKind::Isotropic;
  if (name == "two-point" || name == "twopoint") return CovarianceKind::TwoPoint;
  if (name == "explicit") return CovarianceKind::Explicit;
  throw InvalidArgument("unknown covariance kind '" + name + "'");
}

std::string covariance_kind_name(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::Isotropic: return "isotropic";
    case CovarianceKind::TwoPoint: return "two-point";
    case CovarianceKind::Explicit: return "explicit";
  }
  return "unknown";
}

CovarianceModel::CovarianceModel(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
  if (eigenvalues_.empty()) throw InvalidArgument("covariance needs dimension >= 1");
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    const double v = eigenvalues_[i];
    if (!std::isfinite(v) || v < kMinEigenvalue || v > kMaxEigenvalue)
      throw InvalidArgument("covariance eigenvalue at index " + std::to_string(i) + " is " +
                            std::to_string(v) + "; eigenvalues must lie in [1e-8, 1e8]");
    if (v != eigenvalues_.front()) isotropic_ = false;
  }
  isotropic_ = isotropic_ && eigenvalues_.front() == 1.0;
}

Vector CovarianceModel::diagonal() const {
  return Eigen::Map<const Vector>(eigenvalues_.data(), dim());
}

CovarianceModel build_covariance(CovarianceKind kind, Index d,
                                 const std::vector<double>& explicit_eigenvalues) {
  if (d < 1) throw InvalidArgument("covariance dimension must be >= 1");
  switch (kind) {
    case CovarianceKind::Isotropic:
      return CovarianceModel(std::vector<double>(static_cast<std::size_t>(d), 1.0));
    case CovarianceKind::TwoPoint: {
      std::vector<double> ev(static_cast<std::size_t>(d), 1.0);
      std::fill(ev.begin(), ev.begin() + d / 2, 2.0);
      return CovarianceModel(std::move(ev));
    }
    case CovarianceKind::Explicit:
      if (static_cast<Index>(explicit_eigenvalues.size()) != d)
        throw InvalidArgument("explicit covariance has " +
                              std::to_string(explicit_eigenvalues.size()) +
                              " eigenvalues, expected " + std::to_string(d));
      return CovarianceModel(explicit_eigenvalues);
  }
  throw InvalidArgument("unknown covariance kind");
}

SpectralMeasure spectral_measure_of(const CovarianceModel& cov) {
  return SpectralMeasure::empirical(cov.eigenvalues());
}

Index AspectConfig::d() const { return static_cast<Index>(std::llround(static_cast<double>(n) * gamma)); }

void AspectConfig::validate() const {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  if (d() < 1) throw InvalidArgument("round(n * gamma) must be >= 1");
}

Dataset sample_dataset(const AspectConfig& cfg, const CovarianceModel& cov, const SignalSpec& signal,
                       double sigma, std::uint64_t seed) {
  cfg.validate();
  const Index n = cfg.n;
  const Index d = cfg.d();
  if (cov.dim() != d)
    throw InvalidArgument("covariance dimension " + std::to_string(cov.dim()) +
                          " does not match d = " + std::to_string(d));
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");

  Dataset ds;
  ds.sigma = sigma;
  ds.covariance = cov;

  if (const auto* rs = std::get_if<RandomSignal>(&signal)) {
    if (!(rs->r >= 0.0)) throw InvalidArgument("signal strength r must be nonnegative");
    Rng rng(derive_seed(seed, kSignalStream));
    const double scale = rs->r / std::sqrt(static_cast<double>(d));
    ds.beta.resize(d);
    for (Index j = 0; j < d; ++j) ds.beta[j] = scale * rng.normal();
  } else {
    const auto& det = std::get<DeterministicSignal>(signal);
    if (det.beta.size() != d)
      throw InvalidArgument("deterministic signal has length " + std::to_string(det.beta.size()) +
                            ", expected d = " + std::to_string(d));
    ds.beta = det.beta;
  }

  std::vector<double> root(cov.eigenvalues());
  for (double& v : root) v = std::sqrt(v);
  Rng rng(derive_seed(seed, kDesignStream));
  ds.X.resize(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) ds.X(i, j) = rng.normal() * root[static_cast<std::size_t>(j)];

  ds.noise = draw_noise(n, sigma, derive_seed(seed, kNoiseStream));
  ds.y = ds.X * ds.beta + ds.noise;
  return ds;
}

Dataset resample_noise(const Dataset& ds, std::uint64_t seed) {
  Dataset out = ds;
  out.noise = draw_noise(ds.n(), ds.sigma, seed);
  out.y = ds.X * ds.beta + out.noise;
  return out;
}

}  // namespace baglab
