// Divergence-free, mean-zero velocity fields as truncated Fourier coefficients.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "enscert/errors.hpp"
#include "enscert/wavevector.hpp"

namespace enscert {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
// Volume of the torus [0, 2*pi]^3; spectral norms carry this factor so they
// equal the corresponding integrals over the domain.
inline double torus_volume() { return kTwoPi * kTwoPi * kTwoPi; }

struct Norms {
  double energy = 0.0;     // ||u||^2
  double enstrophy = 0.0;  // ||Du||^2
  double h2 = 0.0;         // ||Au||^2
};

// Dense storage over the cube |k|_inf <= K with both half-spaces stored;
// conjugate symmetry u_hat(-k) = conj(u_hat(k)) is maintained by every
// mutating operation here.
class SpectralField {
 public:
  SpectralField() : SpectralField(1) {}
  explicit SpectralField(int truncation_radius)
      : K_(truncation_radius), side_(2 * truncation_radius + 1),
        data_(std::size_t(3) * side_ * side_ * side_) {
    if (truncation_radius < 1)
      throw malformed_field_error("truncation radius must be >= 1");
  }

  int truncation_radius() const { return K_; }

  bool contains(const Wavevector& k) const { return k.max_abs() <= K_; }

  Vec3c coeff(const Wavevector& k) const {
    const Complex* p = &data_[index(k)];
    return {p[0], p[1], p[2]};
  }

  // Sets u_hat(k) and its conjugate partner.
  void set_coeff(const Wavevector& k, const Vec3c& value) {
    if (k.is_zero()) {
      if (std::abs(value[0]) + std::abs(value[1]) + std::abs(value[2]) != 0.0)
        throw malformed_field_error("mean mode must stay zero");
      return;
    }
    Complex* p = &data_[index(k)];
    p[0] = value[0]; p[1] = value[1]; p[2] = value[2];
    Complex* q = &data_[index(-k)];
    q[0] = std::conj(value[0]); q[1] = std::conj(value[1]); q[2] = std::conj(value[2]);
  }

  void add_coeff(const Wavevector& k, const Vec3c& value) {
    Vec3c c = coeff(k);
    set_coeff(k, {c[0] + value[0], c[1] + value[1], c[2] + value[2]});
  }

  // Visits canonical-half-space modes only (one representative per +/- pair).
  template <typename F>
  void for_each_canonical(F&& f) const {
    Wavevector k;
    for (k[0] = -K_; k[0] <= K_; ++k[0])
      for (k[1] = -K_; k[1] <= K_; ++k[1])
        for (k[2] = -K_; k[2] <= K_; ++k[2]) {
          if (!k.is_canonical()) continue;
          f(k, coeff(k));
        }
  }

  // Largest |k|_inf carrying a nonzero coefficient (0 for the zero field).
  int active_radius() const {
    int r = 0;
    for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
      if (abs2(c) > 0.0) r = std::max(r, k.max_abs());
    });
    return r;
  }

  SpectralField embedded(int new_radius) const {
    if (new_radius == K_) return *this;
    if (new_radius < active_radius())
      throw malformed_field_error("embedding would drop active modes");
    SpectralField out(new_radius);
    for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
      if (abs2(c) > 0.0) out.set_coeff(k, c);
    });
    return out;
  }

  void scale(double s) {
    for (auto& z : data_) z *= s;
  }

  void axpy(double a, const SpectralField& x) {
    if (x.K_ != K_) throw malformed_field_error("axpy: mismatched truncation");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  }

  // Per-mode multiplication by a function of the eigenvalue |k|^2.
  template <typename F>
  void apply_spectral(F&& factor_of_lambda) {
    Wavevector k;
    for (k[0] = -K_; k[0] <= K_; ++k[0])
      for (k[1] = -K_; k[1] <= K_; ++k[1])
        for (k[2] = -K_; k[2] <= K_; ++k[2]) {
          if (k.is_zero()) continue;
          const double s = factor_of_lambda(double(k.norm2()));
          Complex* p = &data_[index(k)];
          p[0] *= s; p[1] *= s; p[2] *= s;
        }
  }

  Norms norms() const {
    const double vol = torus_volume();
    double e = 0, d = 0, a = 0;
    Wavevector k;
    for (k[0] = -K_; k[0] <= K_; ++k[0])
      for (k[1] = -K_; k[1] <= K_; ++k[1])
        for (k[2] = -K_; k[2] <= K_; ++k[2]) {
          if (k.is_zero()) continue;
          const double m = abs2(coeff(k));
          if (m == 0.0) continue;
          const double lam = double(k.norm2());
          e += m;
          d += lam * m;
          a += lam * lam * m;
        }
    return {e * vol, d * vol, a * vol};
  }

  double energy() const { return norms().energy; }
  double enstrophy() const { return norms().enstrophy; }
  double h2() const { return norms().h2; }

  // ||A^{1/2} e^{tA^{1/2}} u||^2 = sum |k|^2 e^{2t|k|} |u_hat|^2 * vol.
  double gevrey_norm(double t) const {
    if (t < 0) throw out_of_range_error("gevrey norm needs t >= 0");
    const double vol = torus_volume();
    double g = 0;
    Wavevector k;
    for (k[0] = -K_; k[0] <= K_; ++k[0])
      for (k[1] = -K_; k[1] <= K_; ++k[1])
        for (k[2] = -K_; k[2] <= K_; ++k[2]) {
          if (k.is_zero()) continue;
          const double m = abs2(coeff(k));
          if (m == 0.0) continue;
          const double lam = double(k.norm2());
          const double expo = 2.0 * t * std::sqrt(lam);
          if (expo > 700.0)
            throw out_of_range_error("gevrey norm exponent out of range");
          g += lam * std::exp(expo) * m;
        }
    return g * vol;
  }

  // Orthogonal per-mode projection onto the divergence-free complement;
  // idempotent and norm-non-increasing mode by mode.
  void leray_project() {
    Wavevector k;
    for (k[0] = -K_; k[0] <= K_; ++k[0])
      for (k[1] = -K_; k[1] <= K_; ++k[1])
        for (k[2] = -K_; k[2] <= K_; ++k[2]) {
          if (k.is_zero()) continue;
          Complex* p = &data_[index(k)];
          const Complex kd = double(k[0]) * p[0] + double(k[1]) * p[1] + double(k[2]) * p[2];
          if (kd == Complex(0.0, 0.0)) continue;
          const double inv = 1.0 / double(k.norm2());
          p[0] -= double(k[0]) * kd * inv;
          p[1] -= double(k[1]) * kd * inv;
          p[2] -= double(k[2]) * kd * inv;
        }
    Complex* z = &data_[index(Wavevector{})];
    z[0] = z[1] = z[2] = Complex(0.0, 0.0);
  }

  double max_divergence() const {
    double worst = 0;
    for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
      worst = std::max(worst, std::abs(kdot(k, c)));
    });
    return worst;
  }

  bool operator==(const SpectralField& o) const {
    return K_ == o.K_ && data_ == o.data_;
  }

 private:
  std::size_t index(const Wavevector& k) const {
    const std::size_t x = std::size_t(k[0] + K_);
    const std::size_t y = std::size_t(k[1] + K_);
    const std::size_t z = std::size_t(k[2] + K_);
    return 3 * ((x * side_ + y) * side_ + z);
  }

  int K_;
  std::size_t side_;
  std::vector<Complex> data_;
};

using RawModes = std::map<Wavevector, Vec3c>;

// Leray projection of raw coefficient data. The input must already be a
// legal Fourier representation of a real field: conjugate-symmetric, zero
// mean. Divergence is then removed mode by mode.
inline SpectralField leray_project(const RawModes& raw, int truncation_radius) {
  const double tol = 1e-13;
  for (const auto& [k, c] : raw) {
    if (k.max_abs() > truncation_radius)
      throw malformed_field_error("raw mode outside the truncation radius");
    if (k.is_zero()) {
      if (std::sqrt(abs2(c)) > tol)
        throw malformed_field_error("raw field has a nonzero mean mode");
      continue;
    }
    auto it = raw.find(-k);
    if (it == raw.end())
      throw malformed_field_error("raw field misses a conjugate partner mode");
    const Vec3c expect = conj(c);
    double diff = 0;
    for (int i = 0; i < 3; ++i) diff += std::abs(it->second[i] - expect[i]);
    if (diff > tol * (1.0 + std::sqrt(abs2(c))))
      throw malformed_field_error("raw field violates conjugate symmetry");
  }
  SpectralField out(truncation_radius);
  for (const auto& [k, c] : raw) {
    if (k.is_zero() || !k.is_canonical()) continue;
    out.set_coeff(k, c);
  }
  out.leray_project();
  return out;
}

inline SpectralField leray_project(const RawModes& raw) {
  int K = 1;
  for (const auto& [k, c] : raw) K = std::max(K, k.max_abs());
  return leray_project(raw, K);
}

// L2 inner product <a, b> = sum Re(a_hat . conj(b_hat)) * vol over shared modes.
inline double l2_inner(const SpectralField& a, const SpectralField& b) {
  const int K = std::min(a.truncation_radius(), b.truncation_radius());
  double s = 0;
  Wavevector k;
  for (k[0] = -K; k[0] <= K; ++k[0])
    for (k[1] = -K; k[1] <= K; ++k[1])
      for (k[2] = -K; k[2] <= K; ++k[2]) {
        if (k.is_zero()) continue;
        const Vec3c ca = a.coeff(k), cb = b.coeff(k);
        for (int i = 0; i < 3; ++i) s += (ca[i] * std::conj(cb[i])).real();
      }
  return s * torus_volume();
}

// Norms of a - b over the union of both containers.
inline Norms diff_norms(const SpectralField& a, const SpectralField& b) {
  const int K = std::max(a.truncation_radius(), b.truncation_radius());
  const double vol = torus_volume();
  Norms out;
  Wavevector k;
  for (k[0] = -K; k[0] <= K; ++k[0])
    for (k[1] = -K; k[1] <= K; ++k[1])
      for (k[2] = -K; k[2] <= K; ++k[2]) {
        if (k.is_zero()) continue;
        Vec3c d{Complex(0, 0), Complex(0, 0), Complex(0, 0)};
        if (a.contains(k)) d = a.coeff(k);
        if (b.contains(k)) {
          const Vec3c cb = b.coeff(k);
          for (int i = 0; i < 3; ++i) d[i] -= cb[i];
        }
        const double m = abs2(d);
        if (m == 0.0) continue;
        const double lam = double(k.norm2());
        out.energy += m * vol;
        out.enstrophy += lam * m * vol;
        out.h2 += lam * lam * m * vol;
      }
  return out;
}

// Rescales to a target value of ||Du||^2 (no-op direction choice for the
// zero field is rejected).
inline void scale_to_enstrophy(SpectralField& u, double target) {
  const double cur = u.enstrophy();
  if (cur == 0.0) {
    if (target == 0.0) return;
    throw malformed_field_error("cannot scale the zero field to a nonzero enstrophy");
  }
  u.scale(std::sqrt(target / cur));
}

inline void scale_to_h2(SpectralField& u, double target) {
  const double cur = u.h2();
  if (cur == 0.0) {
    if (target == 0.0) return;
    throw malformed_field_error("cannot scale the zero field to a nonzero H2 norm");
  }
  u.scale(std::sqrt(target / cur));
}

}  // namespace enscert
