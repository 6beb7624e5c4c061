#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "enscert/random_field.hpp"
#include "enscert/stokes_basis.hpp"

using namespace enscert;

TEST_CASE("basis elements are unit eigenfunctions: norms (1, lambda, lambda^2)", "[basis]") {
  StokesBasis basis;
  basis.extend_to_count(40);
  for (std::int64_t j : {1, 2, 5, 12, 13, 24, 37}) {
    SpectralField w(basis.radius_for_count(j));
    basis.add_scaled(w, j, 1.0);
    const double lam = basis.element(j).lambda;
    const Norms n = w.norms();
    CHECK(n.energy == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(n.enstrophy == Catch::Approx(lam).epsilon(1e-12));
    CHECK(n.h2 == Catch::Approx(lam * lam).epsilon(1e-12));
    CHECK(w.max_divergence() < 1e-15);
  }
}

TEST_CASE("eigenvalues are non-decreasing with the expected multiplicities", "[basis]") {
  StokesBasis basis;
  basis.extend_to_count(60);
  double prev = 0.0;
  for (std::int64_t j = 1; j <= 60; ++j) {
    CHECK(basis.element(j).lambda >= prev);
    prev = basis.element(j).lambda;
  }
  // |k|^2 = 1 has 3 canonical wavevectors -> 12 elements; |k|^2 = 2 has 6 -> 24.
  CHECK(basis.element(1).lambda == 1.0);
  CHECK(basis.element(12).lambda == 1.0);
  CHECK(basis.element(13).lambda == 2.0);
  CHECK(basis.element(36).lambda == 2.0);
  CHECK(basis.element(37).lambda == 3.0);
}

TEST_CASE("enumeration is deterministic", "[basis]") {
  StokesBasis a, b;
  a.extend_to_lambda(30);
  b.extend_to_count(10);  // different extension path
  b.extend_to_lambda(30);
  REQUIRE(a.size() == b.size());
  for (std::int64_t j = 1; j <= a.size(); ++j) {
    CHECK(a.element(j).k == b.element(j).k);
    CHECK(a.element(j).phase == b.element(j).phase);
    CHECK(a.element(j).polarization == b.element(j).polarization);
  }
}

TEST_CASE("basis elements are orthonormal", "[basis]") {
  StokesBasis basis;
  basis.extend_to_count(20);
  const int radius = basis.radius_for_count(20);
  for (std::int64_t i = 1; i <= 20; ++i) {
    SpectralField wi(radius);
    basis.add_scaled(wi, i, 1.0);
    for (std::int64_t j = i; j <= 20; ++j) {
      SpectralField wj(radius);
      basis.add_scaled(wj, j, 1.0);
      const double ip = l2_inner(wi, wj);
      CHECK(ip == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-13));
    }
  }
}

TEST_CASE("polarization vectors are real orthonormal pairs perpendicular to k", "[basis]") {
  for (const Wavevector k :
       {Wavevector{{0, 0, 1}}, Wavevector{{1, 2, -1}}, Wavevector{{3, 0, 4}}, Wavevector{{2, 2, 2}}}) {
    const auto [e1, e2] = polarization_pair(k);
    const auto dot3 = [](const Vec3d& a, const Vec3d& b) {
      return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    CHECK(dot3(e1, e1) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(dot3(e2, e2) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(dot3(e1, e2) == Catch::Approx(0.0).margin(1e-14));
    const Vec3d kd{double(k[0]), double(k[1]), double(k[2])};
    CHECK(dot3(e1, kd) == Catch::Approx(0.0).margin(1e-13));
    CHECK(dot3(e2, kd) == Catch::Approx(0.0).margin(1e-13));
  }
}

TEST_CASE("project_n: degenerate, identity, idempotent", "[basis]") {
  FieldSampler s(17);
  const SpectralField u = s.random_field(2);
  StokesBasis basis;

  const SpectralField p0 = basis.project_n(u, 0);
  CHECK(p0.norms().energy == 0.0);

  // All modes of a radius-2 container have lambda <= 12 < lambda at n = 400.
  const SpectralField pall = basis.project_n(u, 400);
  CHECK(std::sqrt(diff_norms(pall, u).energy) < 1e-14);

  const SpectralField p5 = basis.project_n(u, 5);
  const SpectralField p5b = basis.project_n(p5, 5);
  CHECK(std::sqrt(diff_norms(p5, p5b).energy) < 1e-14);
}

TEST_CASE("project_n reproduces coefficient expansions mid-block", "[basis]") {
  StokesBasis basis;
  basis.extend_to_count(12);
  const int radius = basis.radius_for_count(12);
  SpectralField u(radius);
  // Mix of coefficients across the first three blocks.
  for (std::int64_t j = 1; j <= 12; ++j) basis.add_scaled(u, j, 0.1 * double(j));

  for (const std::int64_t n : {1, 2, 3, 5, 7, 11}) {
    const SpectralField pn = basis.project_n(u, n);
    // Expected field: sum of the first n terms only.
    SpectralField expect(radius);
    for (std::int64_t j = 1; j <= n; ++j) basis.add_scaled(expect, j, 0.1 * double(j));
    CHECK(std::sqrt(diff_norms(pn, expect).energy) < 1e-13);
    // And the retained coefficients agree.
    for (std::int64_t j = 1; j <= n; ++j)
      CHECK(basis.coefficient(pn, j) == Catch::Approx(0.1 * double(j)).epsilon(1e-12));
  }
}

TEST_CASE("spectral tail bound ||D(P_n u - u)||^2 <= ||Au||^2 / lambda_{n+1}", "[basis]") {
  FieldSampler s(41);
  StokesBasis basis;
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralField u = s.random_field(2);
    const double h2 = u.norms().h2;
    for (const std::int64_t n : {0, 1, 6, 12, 13, 36}) {
      const SpectralField pn = basis.project_n(u, n);
      const double tail = diff_norms(pn, u).enstrophy;
      const double lam_next = basis.lambda(n + 1);
      CHECK(tail <= h2 / lam_next * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("count helpers agree with a brute-force shell count", "[basis]") {
  // Brute force: integer points 0 < |k|^2 < T, two real elements per point.
  const auto brute = [](double threshold) {
    std::int64_t count = 0;
    const int r = int(std::ceil(std::sqrt(threshold))) + 1;
    for (int x = -r; x <= r; ++x)
      for (int y = -r; y <= r; ++y)
        for (int z = -r; z <= r; ++z) {
          const long n2 = long(x) * x + long(y) * y + long(z) * z;
          if (n2 > 0 && double(n2) < threshold) count += 2;
        }
    return count;
  };
  StokesBasis basis;
  for (const double threshold : {1.0, 1.5, 2.0, 5.0, 27.0, 64.5}) {
    CHECK(basis.count_lambda_below(threshold) == brute(threshold));
  }
}
