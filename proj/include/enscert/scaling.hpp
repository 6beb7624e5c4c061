// Map between physical-units fields on [0,L]^3 with viscosity nu and the
// non-dimensional problem on [0,2*pi]^3 with nu = 1. Internally everything
// runs non-dimensional; this is the user-facing bridge.
#pragma once

#include <cmath>

#include "enscert/constants.hpp"
#include "enscert/spectral_field.hpp"

namespace enscert {

struct PhysicalDomain {
  double L = kTwoPi;
  double nu = 1.0;

  double lambda1() const { return 4.0 * M_PI * M_PI / (L * L); }
};

// u_tilde = L u / (2 pi nu); mode indices are unchanged since x_tilde = 2 pi x / L.
inline SpectralField nondimensionalize(const SpectralField& physical, const PhysicalDomain& dom) {
  SpectralField out = physical;
  out.scale(dom.L / (kTwoPi * dom.nu));
  return out;
}

inline SpectralField dimensionalize(const SpectralField& dimensionless, const PhysicalDomain& dom) {
  SpectralField out = dimensionless;
  out.scale(kTwoPi * dom.nu / dom.L);
  return out;
}

// Norms of a physical field: wavevectors 2*pi*m/L, volume L^3.
inline Norms physical_norms(const SpectralField& u, const PhysicalDomain& dom) {
  const Norms nd = u.norms();  // carries (2 pi)^3 and integer |m|^2 factors
  const double vol_ratio = (dom.L * dom.L * dom.L) / torus_volume();
  const double lam1 = dom.lambda1();
  return Norms{nd.energy * vol_ratio, nd.enstrophy * vol_ratio * lam1,
               nd.h2 * vol_ratio * lam1 * lam1};
}

// Small-data criterion stated in physical units; equivalent to checking the
// non-dimensionalized field against the default criterion.
inline bool small_data_check_physical(const SpectralField& u, const PhysicalDomain& dom,
                                      const ConstantsLedger& base = {}) {
  ConstantsLedger ledger = base;
  ledger.nu = dom.nu;
  ledger.lambda1 = dom.lambda1();
  return physical_norms(u, dom).enstrophy <= ledger.small_data_enstrophy_threshold();
}

}  // namespace enscert
