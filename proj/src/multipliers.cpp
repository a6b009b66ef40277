#include "baglab/multipliers.hpp"

#include <charconv>
#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/kernels/kernels.hpp"
#include "baglab/rng.hpp"

namespace baglab {

MultiplierScheme MultiplierScheme::bernoulli(double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw InvalidArgument("Bernoulli theta must lie in (0, 1], got " + std::to_string(theta));
  return MultiplierScheme(Kind::Bernoulli, theta);
}
MultiplierScheme MultiplierScheme::multinomial() { return MultiplierScheme(Kind::Multinomial, 1.0); }
MultiplierScheme MultiplierScheme::jackknife() { return MultiplierScheme(Kind::Jackknife, 1.0); }
MultiplierScheme MultiplierScheme::ones() { return MultiplierScheme(Kind::ConstantOne, 1.0); }

MultiplierScheme MultiplierScheme::parse(const std::string& text) {
  if (text == "multinomial") return multinomial();
  if (text == "jackknife") return jackknife();
  if (text == "ones") return ones();
  const std::string prefix = "bernoulli:";
  if (text.rfind(prefix, 0) == 0) {
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    double theta = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, theta);
    if (ec == std::errc() && ptr == last && first != last) return bernoulli(theta);
  }
  throw InvalidArgument("unknown multiplier scheme '" + text +
                        "' (expected bernoulli:<theta>, multinomial, jackknife or ones)");
}

std::string MultiplierScheme::name() const {
  switch (kind_) {
    case Kind::Bernoulli: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, theta_);
      return "bernoulli:" + std::string(buf, ptr);
    }
    case Kind::Multinomial: return "multinomial";
    case Kind::Jackknife: return "jackknife";
    case Kind::ConstantOne: return "ones";
  }
  return "unknown";
}

MultiplierVector::MultiplierVector(Vector w) : w_(std::move(w)) {
  for (Index i = 0; i < w_.size(); ++i)
    if (!std::isfinite(w_[i]) || w_[i] < 0.0)
      throw InvalidArgument("multiplier at index " + std::to_string(i) +
                            " must be finite and nonnegative");
}

Index MultiplierVector::nonzero_count() const { return (w_.array() > 0.0).count(); }

std::vector<Index> MultiplierVector::support() const {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(w_.size()));
  for (Index i = 0; i < w_.size(); ++i)
    if (w_[i] > 0.0) idx.push_back(i);
  return idx;
}

MultiplierVector draw_multipliers(const MultiplierScheme& scheme, Index n, std::uint64_t seed,
                                  std::uint64_t bag) {
  if (n < 1) throw InvalidArgument("multiplier length must be >= 1");
  Vector w = Vector::Ones(n);
  switch (scheme.kind()) {
    case MultiplierScheme::Kind::ConstantOne:
      break;
    case MultiplierScheme::Kind::Jackknife: {
      const auto un = static_cast<std::uint64_t>(n);
      w[static_cast<Index>((splitmix64(seed) % un + bag % un) % un)] = 0.0;
      break;
    }
    case MultiplierScheme::Kind::Bernoulli: {
      Rng rng(derive_seed(seed, bag));
      for (Index i = 0; i < n; ++i) w[i] = rng.bernoulli(scheme.theta()) ? 1.0 : 0.0;
      break;
    }
    case MultiplierScheme::Kind::Multinomial: {
      Rng rng(derive_seed(seed, bag));
      w.setZero();
      const auto un = static_cast<std::uint64_t>(n);
      for (Index k = 0; k < n; ++k) w[static_cast<Index>(rng.index(un))] += 1.0;
      break;
    }
  }
  return MultiplierVector(std::move(w));
}

std::vector<MultiplierVector> draw_bags(const MultiplierScheme& scheme, Index n, int B,
                                        std::uint64_t seed) {
  if (B < 1) throw InvalidArgument("number of bags must be >= 1");
  std::vector<MultiplierVector> bags;
  bags.reserve(static_cast<std::size_t>(B));
  for (int k = 0; k < B; ++k) bags.push_back(draw_multipliers(scheme, n, seed, static_cast<std::uint64_t>(k)));
  return bags;
}

SpectralMeasure truncated_poisson(double lambda, int truncation) {
  if (truncation < 1) throw InvalidArgument("Poisson truncation must be >= 1");
  if (!(lambda > 0.0)) throw InvalidArgument("Poisson rate must be positive");
  std::vector<double> atoms, weights;
  double pmf = std::exp(-lambda);
  double used = 0.0;
  for (int k = 0; k < truncation; ++k) {
    atoms.push_back(k);
    weights.push_back(pmf);
    used += pmf;
    pmf *= lambda / (k + 1);
  }
  atoms.push_back(truncation);
  weights.push_back(std::max(1.0 - used, pmf));
  return SpectralMeasure::normalized(std::move(atoms), std::move(weights));
}

SpectralMeasure limiting_measure(const MultiplierScheme& scheme, int truncation) {
  switch (scheme.kind()) {
    case MultiplierScheme::Kind::Bernoulli:
      if (scheme.theta() == 1.0) return SpectralMeasure::point_mass(1.0);
      return SpectralMeasure({0.0, 1.0}, {1.0 - scheme.theta(), scheme.theta()});
    case MultiplierScheme::Kind::Multinomial:
      return truncated_poisson(1.0, truncation);
    case MultiplierScheme::Kind::Jackknife:
    case MultiplierScheme::Kind::ConstantOne:
      return SpectralMeasure::point_mass(1.0);
  }
  throw InvalidArgument("unknown multiplier scheme");
}

double downsampling_ratio(const MultiplierScheme& scheme) {
  switch (scheme.kind()) {
    case MultiplierScheme::Kind::Bernoulli: return scheme.theta();
    case MultiplierScheme::Kind::Multinomial: return 1.0 - std::exp(-1.0);
    case MultiplierScheme::Kind::Jackknife:
    case MultiplierScheme::Kind::ConstantOne: return 1.0;
  }
  return 1.0;
}

double downsampling_ratio(const SpectralMeasure& mu_w) { return 1.0 - mu_w.mass_at(0.0); }

SketchedDataset apply_sketch(const Dataset& ds, const MultiplierVector& w) {
  if (w.size() != ds.n())
    throw InvalidArgument("multiplier length " + std::to_string(w.size()) +
                          " does not match n = " + std::to_string(ds.n()));
  const Vector s = w.values().cwiseSqrt();
  SketchedDataset out{ds.X, Vector(ds.n()), w};
  const auto& k = kernels::active();
  k.scale(ds.y.data(), s.data(), out.y.data(), static_cast<std::size_t>(ds.n()));
  const auto d = static_cast<std::size_t>(ds.d());
  for (Index i = 0; i < ds.n(); ++i) {
    if (s[i] == 1.0) continue;
    double* row = out.X.row(i).data();
    for (std::size_t j = 0; j < d; ++j) row[j] *= s[i];
  }
  return out;
}

}  // namespace baglab
