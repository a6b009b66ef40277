#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "baglab/kernels/kernels.hpp"

namespace baglab {

// Finite discrete probability measure on [0, inf): atoms with positive
// weights summing to one. Used for eigenvalue laws H, multiplier laws mu_w
// and signal laws G. Atoms are kept sorted ascending and distinct.
class SpectralMeasure {
 public:
  // Duplicate atoms are merged; the weights must be positive and sum to 1
  // within 1e-12.
  SpectralMeasure(std::vector<double> atoms, std::vector<double> weights);

  static SpectralMeasure point_mass(double atom);
  // Empirical law of a sample: distinct values with multiplicity / size.
  static SpectralMeasure empirical(std::span<const double> values);
  // Weights given up to a positive factor.
  static SpectralMeasure normalized(std::vector<double> atoms, std::vector<double> weights);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  double mass_at(double atom) const;
  double mean() const;
  // Smallest nonzero atom, or 0 for a point mass at zero.
  double min_positive_atom() const;
  double expect(const std::function<double(double)>& f) const;

  kernels::ResolventMoments moments(double x) const;

  std::string to_string() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

}  // namespace baglab
