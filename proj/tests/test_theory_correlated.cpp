#include <doctest.h>

#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/multipliers.hpp"
#include "baglab/theory.hpp"

using namespace baglab;
using namespace baglab::theory;

namespace {

const SpectralMeasure kDelta = SpectralMeasure::point_mass(1.0);
const SpectralMeasure kTwoPoint({2.0, 1.0}, {0.5, 0.5});

std::vector<SpectralMeasure> spectra() {
  return {kDelta, kTwoPoint, SpectralMeasure({3.0, 1.0, 0.2}, {0.2, 0.5, 0.3})};
}

}  // namespace

TEST_CASE("v(0) closed forms") {
  CHECK(solve_v(0.0, 2.0, 0.5, kDelta).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(solve_v(0.0, 2.0, 1.0, kDelta).value == doctest::Approx(1.0).epsilon(1e-12));
  const auto s = solve_v(0.0, 1.5, 0.5, kTwoPoint);
  const double v = s.value;
  CHECK(std::abs(3.0 * (0.5 * 2 * v / (1 + 2 * v) + 0.5 * v / (1 + v)) - 1.0) < 1e-12);
  CHECK(std::abs(s.residual) < 1e-12);
  CHECK_THROWS_AS(solve_v(0.0, 0.3, 0.6, kDelta), NoRootError);
}

TEST_CASE("v'(0) closed forms") {
  const double v = solve_v(0.0, 2.0, 0.5, kDelta).value;
  const double vp = v_prime_at_zero(2.0, 0.5, kDelta, v);
  CHECK(vp == doctest::Approx(0.5 / 3.375).epsilon(1e-10));
  CHECK(v_prime_at_zero(2.0, 1.0, kDelta, solve_v(0.0, 2.0, 1.0, kDelta).value) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(vp / (v * v) - 1.0 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("v'(0) agrees with a finite difference") {
  for (const auto& H : spectra()) {
    for (auto [g, t] : {std::pair{2.0, 0.5}, {1.5, 1.0}, {4.0, 0.3}}) {
      const double h = 1e-4;
      const double v0 = solve_v(0.0, g, t, H).value;
      const double vm = solve_v(-h, g, t, H).value;
      const double vm2 = solve_v(-2.0 * h, g, t, H).value;
      const double fd = (3.0 * v0 - 4.0 * vm + vm2) / (2.0 * h);
      CHECK(v_prime(g, t, H, v0) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("tilde measure") {
  CHECK(tilde_measure(kTwoPoint, 0.0).atoms() == kTwoPoint.atoms());
  CHECK(tilde_measure(kDelta, 1.0).mass_at(0.5) == doctest::Approx(1.0));
  const auto t = tilde_measure(SpectralMeasure({2.0, 1.0}, {0.4, 0.6}), 0.5);
  CHECK(t.mass_at(1.0) == doctest::Approx(0.4));
  CHECK(t.atoms()[0] == doctest::Approx(2.0 / 3.0));
  CHECK(t.weights()[0] == doctest::Approx(0.6));
}

TEST_CASE("tilde solution closed forms and identities") {
  const auto s = solve_v_tilde(2.0, 0.5, kDelta);
  CHECK(s.tilde_v0 == doctest::Approx(0.25 / 1.5).epsilon(1e-12));
  CHECK(s.tilde_v0_prime == doctest::Approx(2.0 * 0.0625 / (2.25 * 1.75)).epsilon(1e-10));
  CHECK(s.k0 == doctest::Approx(0.5 * s.v0));
  for (const auto& H : spectra())
    for (double g : {0.8, 1.5, 3.0})
      for (double t : {0.3, 0.6, 1.0}) {
        if (classify_regime(g, t) != Regime::Over) continue;
        const auto st = solve_v_tilde(g, t, H);
        CHECK(st.tilde_v0 == doctest::Approx(t * st.v0).epsilon(1e-10));
      }
  const auto one = solve_v_tilde(2.0, 1.0, kTwoPoint);
  CHECK(one.tilde_v0 == doctest::Approx(one.v0).epsilon(1e-12));
  CHECK(one.tilde_v0_prime == doctest::Approx(one.v0_prime).epsilon(1e-10));
}

TEST_CASE("correlated risks reduce to the isotropic ones") {
  for (double g : {0.2, 0.5, 1.5, 2.0, 4.0, 8.0})
    for (double t : {0.2, 0.5, 0.8, 1.0}) {
      if (classify_regime(g, t) == Regime::NearThreshold) continue;
      const auto mu = limiting_measure(MultiplierScheme::bernoulli(t));
      const auto a = sketched_risk_corr(g, 2.0, 1.5, kDelta, mu).risk;
      const auto b = sketched_risk_iso(g, mu, 2.0, 1.5).risk;
      CHECK(a.risk == doctest::Approx(b.risk).epsilon(1e-10));
      const auto c = bagged_risk_corr(g, t, 2.0, 1.5, kDelta).risk;
      const auto d = bagged_risk_iso(g, t, 2.0, 1.5).risk;
      CHECK(c.bias == doctest::Approx(d.bias).epsilon(1e-10));
      CHECK(c.variance == doctest::Approx(d.variance).epsilon(1e-10));
    }
}

TEST_CASE("under the threshold the covariance does not matter") {
  const auto mu = limiting_measure(MultiplierScheme::bernoulli(0.6));
  CHECK(sketched_risk_corr(0.3, 3.0, 3.0, kDelta, mu).risk.risk ==
        doctest::Approx(sketched_risk_corr(0.3, 3.0, 3.0, kTwoPoint, mu).risk.risk));
  CHECK(bagged_risk_corr(0.3, 0.6, 3.0, 3.0, kTwoPoint).risk.risk ==
        doctest::Approx(bagged_risk_iso(0.3, 0.6, 3.0, 3.0).risk.risk));
}

TEST_CASE("bagging shrinks the variance by at least theta") {
  for (const auto& H : spectra())
    for (double t : {0.2, 0.5, 0.8})
      for (double ratio : {1.05, 1.5, 2.0, 4.0, 10.0}) {
        const double ratio_v = variance_ratio_bagged_vs_sketched(ratio * t, t, H);
        CHECK(ratio_v <= t + 1e-12);
        CHECK(ratio_v > 0.0);
      }
  CHECK(variance_ratio_bagged_vs_sketched(1.01 * 0.5, 0.5, kDelta) < 0.05);
  CHECK(variance_ratio_bagged_vs_sketched(1.01 * 0.5, 0.5, kTwoPoint) < 0.05);
}

TEST_CASE("deterministic signal law recovers the random-signal risk") {
  for (const auto& H : spectra())
    for (auto [g, t] : {std::pair{2.0, 0.5}, {1.5, 0.6}, {4.0, 0.2}}) {
      const auto s = solve_v_tilde(g, t, H);
      const auto law = signal_law_random(H, 3.0, s.k0);
      const auto det = bagged_risk_deterministic(g, t, 2.0, H, law);
      const auto ref = bagged_risk_corr(g, t, 3.0, 2.0, H);
      CHECK(det.risk.bias == doctest::Approx(ref.risk.bias).epsilon(1e-9));
      CHECK(det.risk.variance == doctest::Approx(ref.risk.variance).epsilon(1e-12));
    }
}

TEST_CASE("single-atom signal law") {
  const double g = 2.0, t = 0.5, s_atom = 0.7, r2 = 1.3;
  const auto s = solve_v_tilde(g, t, kDelta);
  const SignalLaw law{SpectralMeasure::point_mass(s_atom), r2};
  const double ratio = s.tilde_v0_prime / (s.tilde_v0 * s.tilde_v0);
  const double expected = r2 * ratio * s_atom / std::pow(1.0 + s.tilde_v0 * s_atom, 2);
  CHECK(bagged_risk_deterministic(g, t, 1.0, kDelta, law).risk.bias == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("signal alignment with the covariance changes the bias") {
  const std::vector<double> eig = {2.0, 2.0, 1.0, 1.0};
  const SpectralMeasure H = SpectralMeasure::empirical(eig);
  const auto s = solve_v_tilde(2.0, 0.5, H);
  Vector top = Vector::Zero(4), bottom = Vector::Zero(4);
  top[0] = 1.0;
  bottom[3] = 1.0;
  const double bt = bagged_risk_deterministic(2.0, 0.5, 1.0, H, signal_law(top, eig, s.k0)).risk.bias;
  const double bb = bagged_risk_deterministic(2.0, 0.5, 1.0, H, signal_law(bottom, eig, s.k0)).risk.bias;
  CHECK(bt != doctest::Approx(bb));
  CHECK(bt > 0.0);
  CHECK(bb > 0.0);
}
