#include "baglab/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "baglab/errors.hpp"

namespace baglab {

SpectralMeasure::SpectralMeasure(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty()) throw InvalidArgument("spectral measure needs at least one atom");
  if (atoms.size() != weights.size())
    throw InvalidArgument("spectral measure: atoms and weights differ in length");
  std::map<double, double> merged;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i]) || atoms[i] < 0.0)
      throw InvalidArgument("spectral measure: atom " + std::to_string(i) +
                            " must be finite and nonnegative");
    if (!std::isfinite(weights[i]) || weights[i] <= 0.0)
      throw InvalidArgument("spectral measure: weight " + std::to_string(i) + " must be positive");
    merged[atoms[i]] += weights[i];
  }
  double total = 0.0;
  for (const auto& [a, w] : merged) {
    atoms_.push_back(a);
    weights_.push_back(w);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("spectral measure: weights sum to " + std::to_string(total) +
                          ", expected 1");
}

SpectralMeasure SpectralMeasure::point_mass(double atom) { return SpectralMeasure({atom}, {1.0}); }

SpectralMeasure SpectralMeasure::empirical(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("empirical measure of an empty sample");
  std::map<double, std::size_t> counts;
  for (double v : values) ++counts[v];
  std::vector<double> atoms, weights;
  const double n = static_cast<double>(values.size());
  for (const auto& [a, c] : counts) {
    atoms.push_back(a);
    weights.push_back(static_cast<double>(c) / n);
  }
  return SpectralMeasure(std::move(atoms), std::move(weights));
}

SpectralMeasure SpectralMeasure::normalized(std::vector<double> atoms, std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw InvalidArgument("spectral measure: total weight must be positive");
  for (double& w : weights) w /= total;
  return SpectralMeasure(std::move(atoms), std::move(weights));
}

double SpectralMeasure::mass_at(double atom) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
  if (it == atoms_.end() || *it != atom) return 0.0;
  return weights_[static_cast<std::size_t>(it - atoms_.begin())];
}

double SpectralMeasure::mean() const {
  return kernels::active().dot(atoms_.data(), weights_.data(), atoms_.size());
}

double SpectralMeasure::min_positive_atom() const {
  for (double a : atoms_)
    if (a > 0.0) return a;
  return 0.0;
}

double SpectralMeasure::expect(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) s += weights_[j] * f(atoms_[j]);
  return s;
}

kernels::ResolventMoments SpectralMeasure::moments(double x) const {
  kernels::ResolventMoments m;
  kernels::active().resolvent_moments(atoms_.data(), weights_.data(), atoms_.size(), x, &m);
  return m;
}

std::string SpectralMeasure::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << '{';
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (j) os << ", ";
    os << atoms_[j] << ": " << weights_[j];
  }
  os << '}';
  return os.str();
}

}  // namespace baglab
