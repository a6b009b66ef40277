#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/theory.hpp"

namespace baglab::theory {

namespace {

void require_positive_atoms(const SpectralMeasure& H) {
  if (H.atoms().front() <= 0.0) throw InvalidArgument("eigenvalue measure must have positive atoms");
}

// Positive root of (z / ratio) x + integral dH/(1 + x t) - (1 - 1/ratio) = 0.
FixedPointSolution solve_resolvent(double z, double ratio, const SpectralMeasure& H) {
  require_positive_atoms(H);
  if (z > 0.0) throw InvalidArgument("v(z) is solved only for z <= 0");
  if (z == 0.0 && !(ratio > 1.0))
    throw NoRootError("v(0) exists only in the overparameterized regime (ratio " +
                      std::to_string(ratio) + " <= 1)");
  const double c = 1.0 - 1.0 / ratio;
  return bisect_decreasing([&](double x) { return z * x / ratio + H.moments(x).m0 - c; }, 1.0,
                           "v equation");
}

double resolvent_derivative(double ratio, const SpectralMeasure& H, double v) {
  const double den = 1.0 - ratio * v * v * H.moments(v).t2q;
  if (!(den > 0.0))
    throw NearThresholdError("derivative of v is unbounded: nonpositive denominator " +
                             std::to_string(den));
  return v * v / den;
}

double theta_of(const SpectralMeasure& mu_w) { return 1.0 - mu_w.mass_at(0.0); }

[[noreturn]] void refuse(double gamma, double theta) {
  throw NearThresholdError("gamma/theta = " + std::to_string(gamma / theta) +
                           " is within the threshold guard; the limiting risk diverges at 1");
}

}  // namespace

FixedPointSolution solve_v(double z, double gamma, double theta, const SpectralMeasure& H) {
  if (!(gamma > 0.0) || !(theta > 0.0 && theta <= 1.0))
    throw InvalidArgument("solve_v needs gamma > 0 and theta in (0, 1]");
  return solve_resolvent(z, gamma / theta, H);
}

double v_prime(double gamma, double theta, const SpectralMeasure& H, double v) {
  return resolvent_derivative(gamma / theta, H, v);
}

SpectralMeasure tilde_measure(const SpectralMeasure& H, double k0) {
  if (!(k0 >= 0.0)) throw InvalidArgument("k0 must be nonnegative");
  std::vector<double> atoms = H.atoms();
  for (double& t : atoms) t = t / (1.0 + k0 * t);
  return SpectralMeasure(std::move(atoms), H.weights());
}

TildeSolution solve_v_tilde(double gamma, double theta, const SpectralMeasure& H) {
  TildeSolution s;
  s.v0 = solve_v(0.0, gamma, theta, H).value;
  s.v0_prime = v_prime(gamma, theta, H, s.v0);
  s.k0 = (1.0 - theta) * s.v0;
  const SpectralMeasure Ht = tilde_measure(H, s.k0);
  const double ratio = gamma / (theta * theta);
  s.tilde_v0 = solve_resolvent(0.0, ratio, Ht).value;
  s.tilde_v0_prime = resolvent_derivative(ratio, Ht, s.tilde_v0);
  return s;
}

TheoryRisk sketched_risk_corr(double gamma, double r, double sigma, const SpectralMeasure& H,
                              const SpectralMeasure& mu_w) {
  if (!(r >= 0.0) || !(sigma >= 0.0)) throw InvalidArgument("r and sigma must be nonnegative");
  const double theta = theta_of(mu_w);
  const Regime regime = classify_regime(gamma, theta);
  if (regime == Regime::NearThreshold) refuse(gamma, theta);
  if (regime == Regime::Under) return sketched_risk_iso(gamma, mu_w, r, sigma);
  const double v = solve_v(0.0, gamma, theta, H).value;
  const double vp = v_prime(gamma, theta, H, v);
  return {RiskDecomposition::from_parts(r * r * theta / (gamma * v),
                                        sigma * sigma * (vp / (v * v) - 1.0)),
          regime};
}

TheoryRisk bagged_risk_corr(double gamma, double theta, double r, double sigma,
                            const SpectralMeasure& H) {
  if (!(r >= 0.0) || !(sigma >= 0.0)) throw InvalidArgument("r and sigma must be nonnegative");
  const Regime regime = classify_regime(gamma, theta);
  if (regime == Regime::NearThreshold) refuse(gamma, theta);
  if (regime == Regime::Under) return bagged_risk_iso(gamma, theta, r, sigma);
  const TildeSolution s = solve_v_tilde(gamma, theta, H);
  const double excess = s.tilde_v0_prime / (s.tilde_v0 * s.tilde_v0) - 1.0;
  const double scale = r * r / (gamma * s.v0);
  const double bias = scale * theta - scale * (1.0 - theta) * excess;
  if (bias < 0.0) throw ConsistencyError("negative limiting bias " + std::to_string(bias));
  return {RiskDecomposition::from_parts(bias, sigma * sigma * excess), regime};
}

double variance_ratio_bagged_vs_sketched(double gamma, double theta, const SpectralMeasure& H) {
  const TildeSolution s = solve_v_tilde(gamma, theta, H);
  const double bagged = s.tilde_v0_prime / (s.tilde_v0 * s.tilde_v0) - 1.0;
  const double single = s.v0_prime / (s.v0 * s.v0) - 1.0;
  return bagged / single;
}

SignalLaw signal_law(const Vector& beta, const std::vector<double>& eigenvalues, double k0) {
  if (beta.size() != static_cast<Index>(eigenvalues.size()))
    throw InvalidArgument("signal and eigenvalues differ in length");
  if (!(k0 >= 0.0)) throw InvalidArgument("k0 must be nonnegative");
  std::vector<double> atoms, weights;
  double r2 = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues[i];
    const double b2 = beta[static_cast<Index>(i)] * beta[static_cast<Index>(i)];
    if (b2 == 0.0) continue;
    atoms.push_back(lam / (1.0 + k0 * lam));
    weights.push_back(b2 / (1.0 + k0 * lam));
    r2 += weights.back();
  }
  if (atoms.empty()) {
    const double lam = eigenvalues.front();
    return {SpectralMeasure::point_mass(lam / (1.0 + k0 * lam)), 0.0};
  }
  return {SpectralMeasure::normalized(std::move(atoms), std::move(weights)), r2};
}

SignalLaw signal_law_random(const SpectralMeasure& H, double r, double k0) {
  if (!(k0 >= 0.0)) throw InvalidArgument("k0 must be nonnegative");
  std::vector<double> atoms, weights;
  double mass = 0.0;
  for (std::size_t j = 0; j < H.size(); ++j) {
    const double t = H.atoms()[j];
    atoms.push_back(t / (1.0 + k0 * t));
    weights.push_back(H.weights()[j] / (1.0 + k0 * t));
    mass += weights.back();
  }
  return {SpectralMeasure::normalized(std::move(atoms), std::move(weights)), r * r * mass};
}

TheoryRisk bagged_risk_deterministic(double gamma, double theta, double sigma,
                                     const SpectralMeasure& H, const SignalLaw& signal) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  const Regime regime = classify_regime(gamma, theta);
  if (regime == Regime::NearThreshold) refuse(gamma, theta);
  if (regime == Regime::Under) return bagged_risk_iso(gamma, theta, 0.0, sigma);
  const TildeSolution s = solve_v_tilde(gamma, theta, H);
  const double ratio = s.tilde_v0_prime / (s.tilde_v0 * s.tilde_v0);
  const double bias = signal.r_tilde_sq * ratio * signal.G.moments(s.tilde_v0).t1q;
  return {RiskDecomposition::from_parts(bias, sigma * sigma * (ratio - 1.0)), regime};
}

}  // namespace baglab::theory
