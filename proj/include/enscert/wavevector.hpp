// Integer wavevectors on the 2*pi-periodic torus and small vector helpers.
#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>

namespace enscert {

using Complex = std::complex<double>;
using Vec3c = std::array<Complex, 3>;
using Vec3d = std::array<double, 3>;

struct Wavevector {
  std::array<int, 3> v{0, 0, 0};

  int operator[](int i) const { return v[i]; }
  int& operator[](int i) { return v[i]; }

  // Stokes eigenvalue of the modes at this wavevector (lambda_1 = 1 for L = 2*pi).
  long norm2() const {
    return long(v[0]) * v[0] + long(v[1]) * v[1] + long(v[2]) * v[2];
  }
  double norm() const { return std::sqrt(double(norm2())); }
  int max_abs() const {
    int m = 0;
    for (int c : v) m = std::max(m, std::abs(c));
    return m;
  }
  bool is_zero() const { return v[0] == 0 && v[1] == 0 && v[2] == 0; }

  // Canonical half-space: first nonzero component positive. Exactly one of
  // {k, -k} is canonical for k != 0; used for conjugate-symmetric storage
  // and for deterministic basis ordering.
  bool is_canonical() const {
    if (v[0] != 0) return v[0] > 0;
    if (v[1] != 0) return v[1] > 0;
    return v[2] > 0;
  }

  Wavevector negated() const { return Wavevector{{-v[0], -v[1], -v[2]}}; }

  auto operator<=>(const Wavevector&) const = default;
};

inline Wavevector operator-(const Wavevector& k) { return k.negated(); }
inline Wavevector operator+(const Wavevector& a, const Wavevector& b) {
  return Wavevector{{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
}
inline Wavevector operator-(const Wavevector& a, const Wavevector& b) {
  return Wavevector{{a[0] - b[0], a[1] - b[1], a[2] - b[2]}};
}

inline Complex dot(const Vec3c& a, const Vec3c& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Complex kdot(const Wavevector& k, const Vec3c& a) {
  return double(k[0]) * a[0] + double(k[1]) * a[1] + double(k[2]) * a[2];
}
inline double abs2(const Vec3c& a) {
  return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
}
inline Vec3c conj(const Vec3c& a) {
  return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

struct WavevectorHash {
  std::size_t operator()(const Wavevector& k) const {
    // Pack into 63 bits; components stay well below 2^20 in practice.
    std::uint64_t h = 0;
    for (int c : k.v) h = h * 0x100000003ULL + std::uint64_t(std::uint32_t(c) + 0x80000000ULL);
    return std::hash<std::uint64_t>{}(h);
  }
};

}  // namespace enscert
