#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "baglab/model_gen.hpp"
#include "baglab/spectral_measure.hpp"
#include "baglab/types.hpp"

namespace baglab {

class MultiplierScheme {
 public:
  enum class Kind { Bernoulli, Multinomial, Jackknife, ConstantOne };

  static MultiplierScheme bernoulli(double theta);
  static MultiplierScheme multinomial();
  static MultiplierScheme jackknife();
  static MultiplierScheme ones();

  // "bernoulli:<theta>", "multinomial", "jackknife" or "ones".
  static MultiplierScheme parse(const std::string& text);

  Kind kind() const { return kind_; }
  // Bernoulli success probability (1 for the other kinds).
  double theta() const { return theta_; }
  // Canonical name, round-trips through parse().
  std::string name() const;

  bool operator==(const MultiplierScheme&) const = default;

 private:
  MultiplierScheme(Kind kind, double theta) : kind_(kind), theta_(theta) {}
  Kind kind_;
  double theta_;
};

// Nonnegative per-observation weights.
class MultiplierVector {
 public:
  MultiplierVector() = default;
  explicit MultiplierVector(Vector w);

  const Vector& values() const { return w_; }
  Index size() const { return w_.size(); }
  double operator[](Index i) const { return w_[i]; }

  Index nonzero_count() const;
  std::vector<Index> support() const;

 private:
  Vector w_;
};

// Bag `bag` of a scheme seeded by `seed`. Random schemes use the sub-stream
// derive_seed(seed, bag); the Jackknife leaves out index (offset + bag) mod n
// where the offset is a hash of the seed.
MultiplierVector draw_multipliers(const MultiplierScheme& scheme, Index n, std::uint64_t seed,
                                  std::uint64_t bag = 0);

std::vector<MultiplierVector> draw_bags(const MultiplierScheme& scheme, Index n, int B,
                                        std::uint64_t seed);

inline constexpr int kDefaultPoissonTruncation = 30;

// Poisson(lambda) on {0..truncation}, tail mass folded into the last atom.
SpectralMeasure truncated_poisson(double lambda, int truncation = kDefaultPoissonTruncation);

SpectralMeasure limiting_measure(const MultiplierScheme& scheme,
                                 int truncation = kDefaultPoissonTruncation);

double downsampling_ratio(const MultiplierScheme& scheme);
double downsampling_ratio(const SpectralMeasure& mu_w);

struct SketchedDataset {
  RowMatrix X;
  Vector y;
  MultiplierVector w;
};

SketchedDataset apply_sketch(const Dataset& ds, const MultiplierVector& w);

}  // namespace baglab
