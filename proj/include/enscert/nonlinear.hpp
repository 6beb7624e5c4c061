// The projected bilinear term B(u,u) = P((u.grad)u), via a dealiased
// collocation grid or an exact convolution sum (the oracle path).
#pragma once

#include <vector>

#include "enscert/errors.hpp"
#include "enscert/fft.hpp"
#include "enscert/spectral_field.hpp"

namespace enscert {

enum class NonlinearMode { pseudospectral, direct_convolution };

namespace detail {

inline std::size_t grid_index(int n, const Wavevector& k) {
  const auto wrap = [n](int c) { return std::size_t((c % n + n) % n); };
  return (wrap(k[0]) * n + wrap(k[1])) * n + wrap(k[2]);
}

// Collocation product path. Velocity components are transformed in packed
// pairs (two real grids per complex FFT); the products u_i u_j come back the
// same way and the convolution is assembled in divergence form
// i * sum_a m_a (u_a u_j)^(m), exact because div u = 0 and the grid is padded
// beyond the aliasing limit for every retained output mode.
inline SpectralField nonlinear_pseudospectral(const SpectralField& u, int out_radius) {
  const int ka = u.active_radius();
  const int K_out = (out_radius > 0) ? out_radius : std::max(1, 2 * ka);
  SpectralField result(K_out);
  if (ka == 0) return result;

  const int reach = std::min(K_out, 2 * ka);
  const int n = next_smooth_size(2 * ka + reach + 1);
  Fft3& fft = fft_for(n);
  const std::size_t total = std::size_t(n) * n * n;

  FftwArray zA(total), zB(total);
  {
    Wavevector k;
    for (k[0] = -ka; k[0] <= ka; ++k[0])
      for (k[1] = -ka; k[1] <= ka; ++k[1])
        for (k[2] = -ka; k[2] <= ka; ++k[2]) {
          if (k.is_zero()) continue;
          const Vec3c c = u.coeff(k);
          const std::size_t g = grid_index(n, k);
          zA[g] = c[0] + Complex(0, 1) * c[1];
          zB[g] = c[2];
        }
  }
  fft.backward(zA);
  fft.backward(zB);

  // Packed products: (u1*u1 + i u1*u2), (u1*u3 + i u2*u2), (u2*u3 + i u3*u3).
  FftwArray pA(total), pB(total), pC(total);
  for (std::size_t g = 0; g < total; ++g) {
    const double w1 = zA[g].real();
    const double w2 = zA[g].imag();
    const double w3 = zB[g].real();
    pA[g] = Complex(w1 * w1, w1 * w2);
    pB[g] = Complex(w1 * w3, w2 * w2);
    pC[g] = Complex(w2 * w3, w3 * w3);
  }
  fft.forward(pA);
  fft.forward(pB);
  fft.forward(pC);

  const double inv = 1.0 / double(total);
  const auto split = [&](FftwArray& z, const Wavevector& m, Complex& re_part, Complex& im_part) {
    const Complex zp = z[grid_index(n, m)] * inv;
    const Complex zm = std::conj(z[grid_index(n, -m)] * inv);
    re_part = 0.5 * (zp + zm);
    im_part = Complex(0, -0.5) * (zp - zm);
  };

  Wavevector m;
  for (m[0] = -reach; m[0] <= reach; ++m[0])
    for (m[1] = -reach; m[1] <= reach; ++m[1])
      for (m[2] = -reach; m[2] <= reach; ++m[2]) {
        if (m.is_zero() || !m.is_canonical()) continue;
        Complex t11, t12, t13, t22, t23, t33;
        split(pA, m, t11, t12);
        split(pB, m, t13, t22);
        split(pC, m, t23, t33);
        const Complex im(0, 1);
        const double m0 = m[0], m1 = m[1], m2 = m[2];
        Vec3c conv{im * (m0 * t11 + m1 * t12 + m2 * t13),
                   im * (m0 * t12 + m1 * t22 + m2 * t23),
                   im * (m0 * t13 + m1 * t23 + m2 * t33)};
        result.set_coeff(m, conv);
      }
  result.leray_project();
  return result;
}

// Exact truncated convolution, convective form i * sum_{k+l=m} (u(k).l) u(l).
// Quadratic in the mode count; guarded to small truncations.
inline SpectralField nonlinear_direct(const SpectralField& u, int out_radius) {
  if (u.truncation_radius() > 8)
    throw cost_guard_error("direct convolution restricted to truncation radius <= 8");
  const int ka = u.active_radius();
  const int K_out = (out_radius > 0) ? out_radius : std::max(1, 2 * ka);
  SpectralField result(K_out);
  if (ka == 0) return result;
  const int reach = std::min(K_out, 2 * ka);

  std::vector<std::pair<Wavevector, Vec3c>> modes;
  Wavevector k;
  for (k[0] = -ka; k[0] <= ka; ++k[0])
    for (k[1] = -ka; k[1] <= ka; ++k[1])
      for (k[2] = -ka; k[2] <= ka; ++k[2]) {
        if (k.is_zero()) continue;
        const Vec3c c = u.coeff(k);
        if (abs2(c) > 0.0) modes.emplace_back(k, c);
      }

  const int side = 2 * reach + 1;
  std::vector<Vec3c> acc(std::size_t(side) * side * side,
                         Vec3c{Complex(0, 0), Complex(0, 0), Complex(0, 0)});
  const auto acc_index = [&](const Wavevector& m) {
    return (std::size_t(m[0] + reach) * side + std::size_t(m[1] + reach)) * side +
           std::size_t(m[2] + reach);
  };
  for (const auto& [ka_, ca] : modes)
    for (const auto& [kb, cb] : modes) {
      const Wavevector m = ka_ + kb;
      if (m.max_abs() > reach) continue;
      const Complex s = Complex(0, 1) * kdot(kb, ca);
      Vec3c& slot = acc[acc_index(m)];
      for (int i = 0; i < 3; ++i) slot[i] += s * cb[i];
    }

  Wavevector m;
  for (m[0] = -reach; m[0] <= reach; ++m[0])
    for (m[1] = -reach; m[1] <= reach; ++m[1])
      for (m[2] = -reach; m[2] <= reach; ++m[2]) {
        if (m.is_zero() || !m.is_canonical()) continue;
        result.set_coeff(m, acc[acc_index(m)]);
      }
  result.leray_project();
  return result;
}

}  // namespace detail

// out_radius <= 0 keeps the full product (radius 2 * active radius), which is
// the exact bilinear term of the truncated field; a positive out_radius
// truncates the result (what a Galerkin right-hand side needs).
inline SpectralField nonlinear_term(const SpectralField& u,
                                    NonlinearMode mode = NonlinearMode::pseudospectral,
                                    int out_radius = -1) {
  return mode == NonlinearMode::pseudospectral
             ? detail::nonlinear_pseudospectral(u, out_radius)
             : detail::nonlinear_direct(u, out_radius);
}

}  // namespace enscert
