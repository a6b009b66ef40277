#include <cmath>

#include "baglab/errors.hpp"
#include "baglab/theory.hpp"

namespace baglab::theory {

FixedPointSolution bisect_decreasing(const std::function<double(double)>& g, double hi0,
                                     const std::string& what) {
  const double g0 = g(0.0);
  if (!(g0 > 0.0)) throw NoRootError(what + ": residual at 0 is not positive, no positive root");

  double hi = hi0 > 0.0 ? hi0 : 1.0;
  double ghi = g(hi);
  while (ghi > 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300)
      throw NoRootError(what + ": residual stays positive, no positive root");
    ghi = g(hi);
  }

  double prev = g0;
  for (int i = 1; i < 16; ++i) {
    const double gi = g(hi * i / 15.0);
    if (!(gi < prev))
      throw ConsistencyError(what + ": residual map is not strictly decreasing on the bracket");
    prev = gi;
  }

  FixedPointSolution sol;
  double lo = 0.0;
  double x = hi;
  double gx = ghi;
  int it = 0;
  while (std::abs(gx) >= kResidualTol && it < kMaxBisection) {
    ++it;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    x = mid;
    gx = gm;
    if (gm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  sol.value = x;
  sol.residual = gx;
  sol.iterations = it;
  sol.lo = lo;
  sol.hi = hi;
  if (!(std::abs(gx) < 1e-12 * std::max(1.0, std::abs(x))) || !(x > 0.0))
    throw NoRootError(what + ": bisection did not reach the residual tolerance");
  return sol;
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::Under: return "under";
    case Regime::Over: return "over";
    case Regime::NearThreshold: return "near-threshold";
  }
  return "unknown";
}

Regime classify_regime(double gamma, double theta, double guard) {
  if (!(gamma > 0.0) || !(theta > 0.0 && theta <= 1.0))
    throw InvalidArgument("regime needs gamma > 0 and theta in (0, 1]");
  const double ratio = gamma / theta;
  if (std::abs(ratio - 1.0) < guard) return Regime::NearThreshold;
  return ratio < 1.0 ? Regime::Under : Regime::Over;
}

}  // namespace baglab::theory
