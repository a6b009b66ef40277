#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/theory.hpp"

namespace baglab::theory {

namespace {

double theta_of(const SpectralMeasure& mu_w) { return 1.0 - mu_w.mass_at(0.0); }

void check_positive(double gamma, double r, double sigma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  if (!(r >= 0.0) || !(sigma >= 0.0)) throw InvalidArgument("r and sigma must be nonnegative");
}

[[noreturn]] void refuse(double gamma, double theta) {
  throw NearThresholdError("gamma/theta = " + std::to_string(gamma / theta) +
                           " is within the threshold guard; the limiting risk diverges at 1");
}

}  // namespace

FixedPointSolution solve_c0(double gamma, const SpectralMeasure& mu_w) {
  const double theta = theta_of(mu_w);
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(gamma < theta))
    throw NoRootError("c0 exists only in the underparameterized regime gamma < theta (gamma = " +
                      std::to_string(gamma) + ", theta = " + std::to_string(theta) + ")");
  return bisect_decreasing([&](double x) { return mu_w.moments(x).m0 - (1.0 - gamma); }, 1.0,
                           "c0 equation");
}

double f_gamma(double gamma, const SpectralMeasure& mu_w) {
  return mu_w.moments(solve_c0(gamma, mu_w).value).q;
}

TheoryRisk sketched_risk_iso(double gamma, const SpectralMeasure& mu_w, double r, double sigma) {
  check_positive(gamma, r, sigma);
  const double theta = theta_of(mu_w);
  const Regime regime = classify_regime(gamma, theta);
  const double s2 = sigma * sigma;
  switch (regime) {
    case Regime::NearThreshold: refuse(gamma, theta);
    case Regime::Under: {
      const double f = f_gamma(gamma, mu_w);
      return {RiskDecomposition::from_parts(0.0, s2 * (gamma / (1.0 - gamma - f) - 1.0)), regime};
    }
    case Regime::Over: {
      const double ratio = gamma / theta;
      return {RiskDecomposition::from_parts(r * r * (ratio - 1.0) / ratio, s2 / (ratio - 1.0)),
              regime};
    }
  }
  throw ConsistencyError("unreachable regime");
}

TheoryRisk bagged_risk_iso(double gamma, double theta, double r, double sigma) {
  check_positive(gamma, r, sigma);
  const Regime regime = classify_regime(gamma, theta);
  const double s2 = sigma * sigma;
  switch (regime) {
    case Regime::NearThreshold: refuse(gamma, theta);
    case Regime::Under:
      return {RiskDecomposition::from_parts(0.0, s2 * gamma / (1.0 - gamma)), regime};
    case Regime::Over: {
      const double den = gamma - theta * theta;
      const double bias = r * r * (gamma - theta) * (gamma - theta) / (gamma * den);
      return {RiskDecomposition::from_parts(bias, s2 * theta * theta / den), regime};
    }
  }
  throw ConsistencyError("unreachable regime");
}

RiskDecomposition minnorm_risk_iso(double gamma, double r, double sigma) {
  return bagged_risk_iso(gamma, 1.0, r, sigma).risk;
}

double ridge_equiv_lambda(double gamma, double theta) {
  if (!(gamma > 0.0) || !(theta > 0.0 && theta <= 1.0))
    throw InvalidArgument("ridge_equiv_lambda needs gamma > 0 and theta in (0, 1]");
  return std::max(0.0, (1.0 - theta) * (gamma / theta - 1.0));
}

double limiting_norm_sq_bagged_iso(double gamma, double theta, double r, double sigma) {
  check_positive(gamma, r, sigma);
  const Regime regime = classify_regime(gamma, theta);
  const double r2 = r * r, s2 = sigma * sigma;
  switch (regime) {
    case Regime::NearThreshold: refuse(gamma, theta);
    case Regime::Under: return r2 + s2 * gamma / (1.0 - gamma);
    case Regime::Over: {
      const double den = gamma - theta * theta;
      return r2 * theta * theta * (gamma + 1.0 - 2.0 * theta) / (gamma * den) +
             s2 * theta * theta / den;
    }
  }
  throw ConsistencyError("unreachable regime");
}

double limiting_norm_sq_minnorm_iso(double gamma, double r, double sigma) {
  return limiting_norm_sq_bagged_iso(gamma, 1.0, r, sigma);
}

double limiting_training_error(double theta, double limiting_risk, double sigma) {
  const double a = 1.0 - theta;
  return a * a * (limiting_risk + sigma * sigma);
}

FixedPointSolution m1_solver(double z, double gamma, const SpectralMeasure& mu_w) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (z > 0.0) throw InvalidArgument("m1 is solved only for z <= 0");
  if (z == 0.0 && !(gamma < theta_of(mu_w)))
    throw InvalidArgument("m1(0) requires gamma < theta");
  // m1 E[w / (1 + gamma w m1)] - z m1 = 1, rewritten as a decreasing map of m1.
  return bisect_decreasing(
      [&](double x) { return 1.0 - x * mu_w.moments(gamma * x).m1 + z * x; }, 1.0, "m1 equation");
}

double m2_solver(double z, double gamma, const SpectralMeasure& mu_w) {
  const double m1 = m1_solver(z, gamma, mu_w).value;
  const auto mom = mu_w.moments(gamma * m1);
  const double den = mom.m0 * mom.m1 - z;
  if (!(den > 0.0)) throw ConsistencyError("m2 equation has a nonpositive coefficient");
  return m1 / den;
}

}  // namespace baglab::theory
