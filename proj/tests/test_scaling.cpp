#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "enscert/certificate.hpp"
#include "enscert/random_field.hpp"
#include "enscert/scaling.hpp"

using namespace enscert;

TEST_CASE("non-dimensionalization round-trips coefficients to 1e-14 relative", "[scaling]") {
  FieldSampler s(2026);
  const SpectralField physical = s.random_field(2);
  const PhysicalDomain dom{1.0, 0.01};
  const SpectralField back = dimensionalize(nondimensionalize(physical, dom), dom);
  physical.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
    const Vec3c b = back.coeff(k);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(b[i] - c[i]) <= 1e-14 * std::abs(c[i]));
  });
}

TEST_CASE("enstrophy scales by 1/(nu^2 lambda1^{1/2})", "[scaling]") {
  FieldSampler s(17);
  const SpectralField physical = s.random_field(2);
  for (const PhysicalDomain dom : {PhysicalDomain{1.0, 0.01}, PhysicalDomain{3.7, 0.2}}) {
    const SpectralField nd = nondimensionalize(physical, dom);
    const double lhs = nd.norms().enstrophy;
    const double rhs = physical_norms(physical, dom).enstrophy /
                       (dom.nu * dom.nu * std::sqrt(dom.lambda1()));
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("the trivial domain leaves norms unchanged", "[scaling]") {
  FieldSampler s(5);
  const SpectralField u = s.random_field(2);
  const PhysicalDomain dom{kTwoPi, 1.0};
  const Norms a = physical_norms(u, dom);
  const Norms b = u.norms();
  CHECK(a.energy == Catch::Approx(b.energy).epsilon(1e-13));
  CHECK(a.enstrophy == Catch::Approx(b.enstrophy).epsilon(1e-13));
  CHECK(a.h2 == Catch::Approx(b.h2).epsilon(1e-13));
}

TEST_CASE("small-data verdict is invariant under the scaling round-trip", "[scaling]") {
  const PhysicalDomain dom{1.0, 0.01};
  const ConstantsLedger constants;
  FieldSampler s(88);

  // Physical thresholds: c^{-1/2} nu^2 lambda1^{1/2} in physical units.
  ConstantsLedger phys = constants;
  phys.nu = dom.nu;
  phys.lambda1 = dom.lambda1();
  const double threshold = phys.small_data_enstrophy_threshold();

  for (const double fraction : {0.5, 0.9, 1.1, 4.0}) {
    SpectralField physical = s.random_field(2);
    const double current = physical_norms(physical, dom).enstrophy;
    physical.scale(std::sqrt(fraction * threshold / current));
    const bool phys_verdict = small_data_check_physical(physical, dom, constants);
    const bool nd_verdict = small_data_check(nondimensionalize(physical, dom), constants);
    CHECK(phys_verdict == (fraction < 1.0));
    CHECK(phys_verdict == nd_verdict);
  }
}
