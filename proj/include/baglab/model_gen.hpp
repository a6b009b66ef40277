#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "baglab/spectral_measure.hpp"
#include "baglab/types.hpp"

namespace baglab {

enum class CovarianceKind { Isotropic, TwoPoint, Explicit };

CovarianceKind parse_covariance_kind(const std::string& name);
std::string covariance_kind_name(CovarianceKind kind);

// Diagonal covariance, stored by its eigenvalues.
class CovarianceModel {
 public:
  static constexpr double kMinEigenvalue = 1e-8;
  static constexpr double kMaxEigenvalue = 1e8;

  explicit CovarianceModel(std::vector<double> eigenvalues);

  Index dim() const { return static_cast<Index>(eigenvalues_.size()); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  bool isotropic() const { return isotropic_; }
  Vector diagonal() const;

 private:
  std::vector<double> eigenvalues_;
  bool isotropic_ = true;
};

// Isotropic: all ones. TwoPoint: the first floor(d/2) eigenvalues are 2 and
// the rest 1. Explicit: `explicit_eigenvalues`, which must have length d.
CovarianceModel build_covariance(CovarianceKind kind, Index d,
                                 const std::vector<double>& explicit_eigenvalues = {});

SpectralMeasure spectral_measure_of(const CovarianceModel& cov);

struct AspectConfig {
  Index n = 1;
  double gamma = 1.0;

  // round(n * gamma)
  Index d() const;
  void validate() const;
};

struct RandomSignal {
  double r = 1.0;  // beta ~ N(0, r^2 I / d)
};
struct DeterministicSignal {
  Vector beta;
};
using SignalSpec = std::variant<RandomSignal, DeterministicSignal>;

struct Dataset {
  RowMatrix X;
  Vector y;
  Vector beta;
  Vector noise;
  double sigma = 0.0;
  CovarianceModel covariance{std::vector<double>{1.0}};

  Index n() const { return X.rows(); }
  Index d() const { return X.cols(); }
};

Dataset sample_dataset(const AspectConfig& cfg, const CovarianceModel& cov, const SignalSpec& signal,
                       double sigma, std::uint64_t seed);

// New noise and response on the same design and signal.
Dataset resample_noise(const Dataset& ds, std::uint64_t seed);

}  // namespace baglab
