#pragma once

#include <functional>
#include <string>

#include "baglab/risk_decomposition.hpp"
#include "baglab/spectral_measure.hpp"
#include "baglab/types.hpp"

namespace baglab::theory {

inline constexpr double kThresholdGuard = 0.02;
inline constexpr double kResidualTol = 1e-13;
inline constexpr int kMaxBisection = 200;

struct FixedPointSolution {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double lo = 0.0;
  double hi = 0.0;
};

// Root of a strictly decreasing map g on [0, inf) with g(0) > 0. The upper
// bracket starts at hi0 and doubles until g changes sign; the bracket is
// checked for monotonicity at 16 points before bisecting. `what` names the
// equation in error messages.
FixedPointSolution bisect_decreasing(const std::function<double(double)>& g, double hi0,
                                     const std::string& what);

enum class Regime { Under, Over, NearThreshold };

std::string regime_name(Regime regime);
Regime classify_regime(double gamma, double theta, double guard = kThresholdGuard);

struct TheoryRisk {
  RiskDecomposition risk;
  Regime regime;
};

// ---- isotropic features -------------------------------------------------

// Positive root c0 of  integral 1/(1 + x t) d mu_w(t) = 1 - gamma  (gamma < theta).
FixedPointSolution solve_c0(double gamma, const SpectralMeasure& mu_w);

// integral 1/(1 + c0 t)^2 d mu_w(t)
double f_gamma(double gamma, const SpectralMeasure& mu_w);

TheoryRisk sketched_risk_iso(double gamma, const SpectralMeasure& mu_w, double r, double sigma);
TheoryRisk bagged_risk_iso(double gamma, double theta, double r, double sigma);
RiskDecomposition minnorm_risk_iso(double gamma, double r, double sigma);

double ridge_equiv_lambda(double gamma, double theta);
double limiting_norm_sq_bagged_iso(double gamma, double theta, double r, double sigma);
double limiting_norm_sq_minnorm_iso(double gamma, double r, double sigma);
double limiting_training_error(double theta, double limiting_risk, double sigma);

// m1(z): root of m1 E[w / (1 + gamma w m1)] - z m1 = 1.
FixedPointSolution m1_solver(double z, double gamma, const SpectralMeasure& mu_w);
// m2(z) from m2 (E[1/(1 + gamma w m1)] E[w/(1 + gamma w m1)] - z) = m1.
double m2_solver(double z, double gamma, const SpectralMeasure& mu_w);

// ---- correlated features ------------------------------------------------

// v(z): root of (theta/gamma) z x + integral dH/(1 + x t) - (1 - theta/gamma) = 0.
FixedPointSolution solve_v(double z, double gamma, double theta, const SpectralMeasure& H);

// v'(z) = v^2 / (1 - (gamma/theta) integral v^2 t^2 / (1 + v t)^2 dH).
double v_prime(double gamma, double theta, const SpectralMeasure& H, double v);
inline double v_prime_at_zero(double gamma, double theta, const SpectralMeasure& H, double v0) {
  return v_prime(gamma, theta, H, v0);
}

// Atoms t -> t / (1 + k0 t), weights unchanged.
SpectralMeasure tilde_measure(const SpectralMeasure& H, double k0);

struct TildeSolution {
  double v0 = 0.0;
  double v0_prime = 0.0;
  double k0 = 0.0;
  double tilde_v0 = 0.0;
  double tilde_v0_prime = 0.0;
};

// v(0), k(0) = (1 - theta) v(0), and the solution of the same equation with
// ratio gamma/theta^2 over the transformed measure.
TildeSolution solve_v_tilde(double gamma, double theta, const SpectralMeasure& H);

TheoryRisk sketched_risk_corr(double gamma, double r, double sigma, const SpectralMeasure& H,
                              const SpectralMeasure& mu_w);
TheoryRisk bagged_risk_corr(double gamma, double theta, double r, double sigma,
                            const SpectralMeasure& H);

// Variance of the bagged limit over the variance of the single sketch, for gamma > theta.
double variance_ratio_bagged_vs_sketched(double gamma, double theta, const SpectralMeasure& H);

// ---- deterministic signal -----------------------------------------------

struct SignalLaw {
  SpectralMeasure G;
  double r_tilde_sq;
};

// G has atoms lambda_i / (1 + k lambda_i) with weights proportional to
// beta_i^2 / (1 + k lambda_i), and r_tilde^2 = beta^T (I + k Sigma)^{-1} beta.
SignalLaw signal_law(const Vector& beta, const std::vector<double>& eigenvalues, double k0);
// Same construction for beta ~ N(0, r^2 I / d) in the large-d limit.
SignalLaw signal_law_random(const SpectralMeasure& H, double r, double k0);

TheoryRisk bagged_risk_deterministic(double gamma, double theta, double sigma,
                                     const SpectralMeasure& H, const SignalLaw& signal);

}  // namespace baglab::theory
