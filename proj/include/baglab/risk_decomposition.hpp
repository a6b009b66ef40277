#pragma once

namespace baglab {

struct RiskDecomposition {
  double bias = 0.0;
  double variance = 0.0;
  double risk = 0.0;

  static RiskDecomposition from_parts(double bias, double variance) {
    return {bias, variance, bias + variance};
  }
};

}  // namespace baglab
