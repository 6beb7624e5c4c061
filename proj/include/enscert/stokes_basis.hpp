// Real orthonormal eigenbasis of the Stokes operator on the torus and the
// spectral projections P_n onto its leading eigenfunctions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "enscert/errors.hpp"
#include "enscert/spectral_field.hpp"
#include "enscert/wavevector.hpp"

namespace enscert {

enum class Phase : int { cos = 0, sin = 1 };

// One real eigenfunction: a cosine or sine profile along a canonical
// wavevector, polarized along one of two real unit vectors perpendicular
// to it. Each canonical wavevector carries a block of four elements in the
// fixed order (cos,e1), (cos,e2), (sin,e1), (sin,e2).
struct BasisElement {
  std::int64_t ordinal = 0;  // 1-based
  Wavevector k;
  Phase phase = Phase::cos;
  int polarization = 1;  // 1 or 2
  double lambda = 0.0;   // |k|^2
  Vec3d e{0, 0, 0};      // real polarization vector
};

// Polarization pair for a canonical wavevector: Gram-Schmidt of the
// coordinate axis least aligned with k, then the cross product. Fully
// deterministic; never degenerate since the chosen axis has the smallest
// |k_i| and k != 0.
inline std::pair<Vec3d, Vec3d> polarization_pair(const Wavevector& k) {
  const double n = k.norm();
  const Vec3d khat{k[0] / n, k[1] / n, k[2] / n};
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(k[i]) < std::abs(k[axis])) axis = i;
  Vec3d a{0, 0, 0};
  a[axis] = 1.0;
  const double proj = a[0] * khat[0] + a[1] * khat[1] + a[2] * khat[2];
  Vec3d e1{a[0] - proj * khat[0], a[1] - proj * khat[1], a[2] - proj * khat[2]};
  const double m = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  e1 = {e1[0] / m, e1[1] / m, e1[2] / m};
  const Vec3d e2{khat[1] * e1[2] - khat[2] * e1[1],
                 khat[2] * e1[0] - khat[0] * e1[2],
                 khat[0] * e1[1] - khat[1] * e1[0]};
  return {e1, e2};
}

class StokesBasis {
 public:
  StokesBasis() = default;

  // Extends the enumeration to cover every eigenvalue <= lambda_cap.
  void extend_to_lambda(long lambda_cap) {
    if (lambda_cap <= built_lambda_) return;
    rebuild(lambda_cap);
  }

  // Extends until at least n elements exist.
  void extend_to_count(std::int64_t n) {
    long cap = std::max<long>(built_lambda_, 1);
    while (std::int64_t(elements_.size()) < n) {
      cap *= 2;
      rebuild(cap);
      if (cap > (1L << 40)) throw error("basis enumeration cap exploded");
    }
  }

  std::int64_t size() const { return std::int64_t(elements_.size()); }
  long built_lambda() const { return built_lambda_; }

  const BasisElement& element(std::int64_t ordinal) const {
    return elements_.at(std::size_t(ordinal - 1));
  }

  double lambda(std::int64_t ordinal) {
    extend_to_count(ordinal);
    return element(ordinal).lambda;
  }

  // sum_{j<=n} lambda_j, used by the covering grid criterion.
  double lambda_prefix_sum(std::int64_t n) {
    extend_to_count(n);
    double s = 0;
    for (std::int64_t j = 1; j <= n; ++j) s += element(j).lambda;
    return s;
  }

  // Number of eigenvalues strictly below the threshold; this is the smallest
  // N with lambda_{N+1} >= threshold.
  std::int64_t count_lambda_below(double threshold) {
    if (threshold <= 1.0) return 0;
    extend_to_lambda(long(std::ceil(threshold)) + 1);
    std::int64_t n = 0;
    for (const auto& el : elements_) {
      if (el.lambda < threshold) ++n;
      else break;
    }
    return n;
  }

  // Base ordinal (1-based) of the 4-element block of a canonical wavevector.
  std::int64_t block_base(const Wavevector& canonical_k) {
    extend_to_lambda(canonical_k.norm2());
    auto it = block_base_.find(canonical_k);
    if (it == block_base_.end()) throw error("wavevector not in the built basis");
    return it->second;
  }

  // Adds alpha * w_j into the field (which must contain the block's modes).
  void add_scaled(SpectralField& u, std::int64_t ordinal, double alpha) {
    extend_to_count(ordinal);
    const BasisElement& el = element(ordinal);
    if (!u.contains(el.k))
      throw malformed_field_error("basis element outside the field truncation");
    // Orthonormal real profiles: sqrt(2/V) cos(kx) and sqrt(2/V) sin(kx).
    const double amp = alpha / std::sqrt(2.0 * torus_volume());
    Vec3c add;
    for (int i = 0; i < 3; ++i) {
      const Complex unit = (el.phase == Phase::cos) ? Complex(1, 0) : Complex(0, -1);
      add[i] = amp * unit * el.e[i];
    }
    u.add_coeff(el.k, add);
  }

  // Coefficient <u, w_j> of the field along basis element j.
  double coefficient(const SpectralField& u, std::int64_t ordinal) {
    extend_to_count(ordinal);
    const BasisElement& el = element(ordinal);
    if (!u.contains(el.k)) return 0.0;
    const Vec3c c = u.coeff(el.k);
    const Complex x = c[0] * el.e[0] + c[1] * el.e[1] + c[2] * el.e[2];
    const double s = std::sqrt(2.0 * torus_volume());
    return (el.phase == Phase::cos) ? s * x.real() : -s * x.imag();
  }

  // Orthogonal projection onto the span of the first n elements. n = 0 gives
  // the zero field.
  SpectralField project_n(const SpectralField& u, std::int64_t n) {
    SpectralField out(u.truncation_radius());
    if (n <= 0) return out;
    extend_to_count(n);
    const long lam_n = long(element(n).lambda);
    u.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
      if (abs2(c) == 0.0) return;
      if (k.norm2() > lam_n) return;  // whole block beyond P_n
      const std::int64_t base = block_base(k);
      if (base + 3 <= n) {
        out.set_coeff(k, c);  // whole block retained
        return;
      }
      Vec3c kept{Complex(0, 0), Complex(0, 0), Complex(0, 0)};
      for (int slot = 0; slot < 4; ++slot) {
        const std::int64_t j = base + slot;
        if (j > n) break;
        const double beta = coefficient(u, j);
        if (beta == 0.0) continue;
        const BasisElement& el = element(j);
        const double amp = beta / std::sqrt(2.0 * torus_volume());
        const Complex unit = (el.phase == Phase::cos) ? Complex(1, 0) : Complex(0, -1);
        for (int i = 0; i < 3; ++i) kept[i] += amp * unit * el.e[i];
      }
      out.set_coeff(k, kept);
    });
    return out;
  }

  // Smallest truncation radius whose cube contains the first n elements.
  int radius_for_count(std::int64_t n) {
    if (n <= 0) return 1;
    extend_to_count(n);
    int r = 1;
    for (std::int64_t j = 1; j <= n; ++j) r = std::max(r, element(j).k.max_abs());
    return r;
  }

  // Number of elements with eigenvalue <= lambda_cap (the default Galerkin
  // dimension for a resolution-K container is this at lambda_cap = K^2).
  std::int64_t count_lambda_at_most(long lambda_cap) {
    extend_to_lambda(lambda_cap + 1);
    std::int64_t n = 0;
    for (const auto& el : elements_) {
      if (el.lambda <= double(lambda_cap)) ++n;
      else break;
    }
    return n;
  }

 private:
  void rebuild(long lambda_cap) {
    // Canonical wavevectors with |k|^2 <= cap, ordered by (eigenvalue, lex).
    const int r = int(std::floor(std::sqrt(double(lambda_cap)))) + 1;
    std::vector<Wavevector> canon;
    Wavevector k;
    for (k[0] = -r; k[0] <= r; ++k[0])
      for (k[1] = -r; k[1] <= r; ++k[1])
        for (k[2] = -r; k[2] <= r; ++k[2]) {
          if (k.is_zero() || !k.is_canonical()) continue;
          if (k.norm2() > lambda_cap) continue;
          canon.push_back(k);
        }
    std::sort(canon.begin(), canon.end(), [](const Wavevector& a, const Wavevector& b) {
      if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
      return a < b;
    });
    elements_.clear();
    block_base_.clear();
    elements_.reserve(canon.size() * 4);
    std::int64_t ordinal = 1;
    for (const auto& kk : canon) {
      const auto [e1, e2] = polarization_pair(kk);
      block_base_[kk] = ordinal;
      const double lam = double(kk.norm2());
      for (int slot = 0; slot < 4; ++slot) {
        BasisElement el;
        el.ordinal = ordinal++;
        el.k = kk;
        el.phase = (slot < 2) ? Phase::cos : Phase::sin;
        el.polarization = (slot % 2) + 1;
        el.lambda = lam;
        el.e = (slot % 2 == 0) ? e1 : e2;
        elements_.push_back(el);
      }
    }
    built_lambda_ = lambda_cap;
  }

  long built_lambda_ = 0;
  std::vector<BasisElement> elements_;
  std::unordered_map<Wavevector, std::int64_t, WavevectorHash> block_base_;
};

inline SpectralField project_n(const SpectralField& u, std::int64_t n) {
  StokesBasis basis;
  return basis.project_n(u, n);
}

}  // namespace enscert
