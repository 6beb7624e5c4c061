// Seeded divergence-free random fields for pilots, property tests and demos.
#pragma once

#include <cstdint>
#include <random>

#include "enscert/spectral_field.hpp"

namespace enscert {

class FieldSampler {
 public:
  explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() {
    // 53-bit mantissa draw; identical across standard libraries.
    return double(rng_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    // Box-Muller; second value discarded to keep the stream simple.
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Random field with complex Gaussian coefficients on every canonical mode
  // within the radius, Leray-projected.
  SpectralField random_field(int truncation_radius) {
    SpectralField u(truncation_radius);
    Wavevector k;
    const int K = truncation_radius;
    for (k[0] = -K; k[0] <= K; ++k[0])
      for (k[1] = -K; k[1] <= K; ++k[1])
        for (k[2] = -K; k[2] <= K; ++k[2]) {
          if (k.is_zero() || !k.is_canonical()) continue;
          Vec3c c;
          for (int i = 0; i < 3; ++i) c[i] = Complex(gaussian(), gaussian());
          u.set_coeff(k, c);
        }
    u.leray_project();
    return u;
  }

  // Targets are the squared norms: enstrophy = ||Du||^2, h2 = ||Au||^2.
  SpectralField random_field_with_enstrophy(int truncation_radius, double enstrophy) {
    SpectralField u = random_field(truncation_radius);
    scale_to_enstrophy(u, enstrophy);
    return u;
  }

  SpectralField random_field_with_h2(int truncation_radius, double h2) {
    SpectralField u = random_field(truncation_radius);
    scale_to_h2(u, h2);
    return u;
  }

 private:
  std::mt19937_64 rng_;
};

// The reference shear flow (a sin(x3), 0, 0): a single-shell field whose
// self-advection vanishes, so it decays exactly like e^{-t}.
inline SpectralField shear_field(double amplitude, int truncation_radius = 1) {
  SpectralField u(truncation_radius);
  const Wavevector k{{0, 0, 1}};
  // sin(x3) = (e^{i x3} - e^{-i x3}) / (2i)
  u.set_coeff(k, Vec3c{Complex(0.0, -0.5 * amplitude), Complex(0, 0), Complex(0, 0)});
  return u;
}

}  // namespace enscert
