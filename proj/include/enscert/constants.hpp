// Ledger of the analytic constants entering every certificate.
#pragma once

#include <cmath>

#include "enscert/errors.hpp"

namespace enscert {

// All thresholds are conditional on these values; reports always carry a
// snapshot so a verdict can never be quoted without the constants behind it.
struct ConstantsLedger {
  // Trilinear Sobolev constant for the cubic torus.
  double k_const = default_k();
  // c = 27 k^4 / 16; controls the small-data ball, T*, and the robustness
  // threshold exponent.
  double c_const = default_c();
  // Gevrey smoothing constant.
  double K1 = 3266.0;
  double lambda1 = 1.0;
  double nu = 1.0;

  static double default_k() { return 9.0 * std::pow(2.0, 15.0 / 4.0); }
  static double default_c() {
    const double k = default_k();
    return 27.0 * k * k * k * k / 16.0;
  }

  bool c_is_default() const { return c_const == default_c(); }

  void validate() const {
    if (!(k_const > 0) || !(c_const > 0) || !(K1 > 0) || !(lambda1 > 0) || !(nu > 0))
      throw config_error("constants ledger: all entries must be strictly positive");
  }

  // Enstrophy threshold of the small-data criterion: ||Du0||^2 <= c^{-1/2} nu^2 lambda1^{1/2}.
  double small_data_enstrophy_threshold() const {
    return nu * nu * std::sqrt(lambda1) / std::sqrt(c_const);
  }
  // V-norm radius of the small-data ball (= c^{-1/4} with defaults).
  double small_data_radius_v() const {
    return std::sqrt(small_data_enstrophy_threshold());
  }
};

}  // namespace enscert
