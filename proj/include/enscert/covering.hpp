// Covering lattice over an H2 ball, the uniform robustness radius delta(S),
// empirical stand-ins for the uniform trajectory bounds, and the Gevrey
// reduction from a V ball to an H2 ball.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "enscert/constants.hpp"
#include "enscert/errors.hpp"
#include "enscert/integrator.hpp"
#include "enscert/spectral_field.hpp"
#include "enscert/stokes_basis.hpp"

namespace enscert {

struct LatticeSpec {
  std::int64_t N = 0;  // retained basis dimension
  int M = 0;           // dyadic refinement: alpha_j = a_j / 2^M
  double S = 0.0;      // H2 ball radius
  double delta = 0.0;  // V-norm covering radius
};

enum class BoundsProvenance { empirical, user_supplied };

inline std::string to_string(BoundsProvenance p) {
  return p == BoundsProvenance::empirical ? "empirical" : "user_supplied";
}
inline BoundsProvenance provenance_from_string(const std::string& s) {
  if (s == "empirical") return BoundsProvenance::empirical;
  if (s == "user_supplied") return BoundsProvenance::user_supplied;
  throw error("unknown bounds provenance: " + s);
}

struct UniformBounds {
  double D_S = 0.0;  // sup_t ||Du|| over the ball's trajectories
  double E_S = 0.0;  // sup int_0^T ||Au||^2
  BoundsProvenance provenance = BoundsProvenance::empirical;
  double safety_factor = 1.0;
};

// Tail criterion. The safe rule lambda_{N+1} >= 4 S^2 / delta^2 keeps the
// squared-norm error budget consistent; the looser textbook rule
// lambda_{N+1} >= 2 S^2 / delta is reported alongside for comparison.
inline std::int64_t choose_N(double S, double delta) {
  if (!(S > 0) || !(delta > 0)) throw config_error("choose_N needs S, delta > 0");
  StokesBasis basis;
  return basis.count_lambda_below(4.0 * S * S / (delta * delta));
}

inline std::int64_t choose_N_paper_rule(double S, double delta) {
  if (!(S > 0) || !(delta > 0)) throw config_error("choose_N needs S, delta > 0");
  StokesBasis basis;
  return basis.count_lambda_below(2.0 * S * S / delta);
}

// Grid criterion. The safe rule accounts for the accumulation of
// per-coordinate rounding across all N retained directions in the V norm:
// 2^{-M-1} (sum_{j<=N} lambda_j)^{1/2} <= delta / 2.
inline int choose_M(std::int64_t N, double delta) {
  if (!(delta > 0)) throw config_error("choose_M needs delta > 0");
  if (N <= 0) return 0;
  StokesBasis basis;
  const double root = std::sqrt(basis.lambda_prefix_sum(N));
  int M = 0;
  while (std::ldexp(1.0, -M - 1) * root > delta / 2.0) {
    ++M;
    if (M > 1000) throw config_error("choose_M did not terminate");
  }
  return M;
}

// The per-coordinate textbook rule 2^{-M} < delta/2, reported for comparison.
inline int choose_M_paper_rule(double delta) {
  if (!(delta > 0)) throw config_error("choose_M needs delta > 0");
  int M = 0;
  while (std::ldexp(1.0, -M) >= delta / 2.0) {
    ++M;
    if (M > 1000) throw config_error("choose_M did not terminate");
  }
  return M;
}

namespace detail {

// Depth-first walk of the integer points a in Z^N with
// sum_j lambda_j^2 (a_j / 2^M)^2 <= S^2, in lexicographic order.
// Visits coefficient vectors; returns false if the cap fired. A traversal
// budget (proportional to the cap) bounds the walk even when the tree is
// deep and thin.
inline bool walk_lattice(StokesBasis& basis, const LatticeSpec& spec,
                         std::uint64_t cap, std::uint64_t& count,
                         const std::function<void(const std::vector<double>&)>* visit) {
  std::vector<double> lambda(std::size_t(spec.N));
  for (std::int64_t j = 1; j <= spec.N; ++j)
    lambda[std::size_t(j - 1)] = basis.lambda(j);
  const double scale = std::ldexp(1.0, -spec.M);  // 2^{-M}
  const double budget = spec.S * spec.S;
  std::vector<double> alpha(std::size_t(spec.N), 0.0);
  std::uint64_t frames = 0;
  const std::uint64_t frame_budget =
      (cap > (std::uint64_t(1) << 57)) ? std::uint64_t(-1) : 64 * cap + 1024;

  std::function<bool(std::size_t, double)> rec = [&](std::size_t depth, double spent) -> bool {
    if (++frames > frame_budget) return false;
    if (depth == alpha.size()) {
      if (++count > cap) return false;
      if (visit) (*visit)(alpha);
      return true;
    }
    const double lam2 = lambda[depth] * lambda[depth];
    const double room = budget - spent;
    const long amax = long(std::floor(std::sqrt(std::max(0.0, room / lam2)) / scale + 1e-12));
    for (long a = -amax; a <= amax; ++a) {
      const double aj = double(a) * scale;
      const double cost = lam2 * aj * aj;
      if (cost > room + 1e-15 * budget) continue;
      alpha[depth] = aj;
      if (!rec(depth + 1, spent + cost)) return false;
    }
    alpha[depth] = 0.0;
    return true;
  };
  count = 0;
  if (spec.N == 0) {
    count = 1;
    if (visit) (*visit)(alpha);
    return true;
  }
  return rec(0, 0.0);
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultCountCap = 10'000'000;

namespace detail {

// Cheap sound lower bound on the lattice size: the axis-aligned box with
// per-coordinate radius S / (lambda_j sqrt(N)) lies inside the ellipsoid.
// Lets an infeasible campaign be refused without walking the lattice.
inline std::uint64_t lattice_size_lower_bound(const LatticeSpec& spec,
                                              std::uint64_t clamp) {
  if (spec.N <= 0) return 1;
  StokesBasis basis;
  const double scale = std::ldexp(1.0, spec.M);  // 2^M
  const double root_n = std::sqrt(double(spec.N));
  std::uint64_t product = 1;
  for (std::int64_t j = 1; j <= spec.N; ++j) {
    const double radius = spec.S / (basis.lambda(j) * root_n) * scale;
    const std::uint64_t per_dim = 2 * std::uint64_t(std::floor(radius)) + 1;
    if (per_dim > 1 && product > clamp / per_dim) return clamp + 1;
    product *= per_dim;
  }
  return product;
}

}  // namespace detail

// Number of lattice points; refuses to run past the cap.
inline std::uint64_t count_lattice(const LatticeSpec& spec,
                                   std::uint64_t cap = kDefaultCountCap) {
  if (detail::lattice_size_lower_bound(spec, cap) > cap)
    throw count_cap_error("lattice size exceeds the configured cap", cap);
  StokesBasis basis;
  std::uint64_t count = 0;
  if (!detail::walk_lattice(basis, spec, cap, count, nullptr))
    throw count_cap_error("lattice size exceeds the configured cap", count);
  return count;
}

// Deterministic enumeration: visits (index, coefficients, field) in
// lexicographic coefficient order.
inline std::uint64_t enumerate_lattice(
    const LatticeSpec& spec,
    const std::function<void(std::uint64_t, const std::vector<double>&, const SpectralField&)>& f,
    std::uint64_t cap = kDefaultCountCap) {
  if (detail::lattice_size_lower_bound(spec, cap) > cap)
    throw count_cap_error("lattice size exceeds the configured cap", cap);
  StokesBasis basis;
  const int radius = basis.radius_for_count(spec.N);
  std::uint64_t index = 0;
  const std::function<void(const std::vector<double>&)> visit =
      [&](const std::vector<double>& alpha) {
        SpectralField u(radius);
        for (std::size_t j = 0; j < alpha.size(); ++j)
          if (alpha[j] != 0.0) basis.add_scaled(u, std::int64_t(j + 1), alpha[j]);
        f(index++, alpha, u);
      };
  std::uint64_t count = 0;
  if (!detail::walk_lattice(basis, spec, cap, count, &visit))
    throw count_cap_error("lattice size exceeds the configured cap", count);
  return count;
}

// Uniform robustness radius: delta = c (T*)^{-1/4} exp(-c I_S) with
// I_S = T* D_S^4 + (T* D_S^2)^{1/2} E_S.
inline double delta_of_S(const UniformBounds& bounds, double Tstar,
                         const ConstantsLedger& ledger = {}) {
  if (!(Tstar > 0)) throw config_error("delta_of_S needs T* > 0");
  if (bounds.D_S < 0 || bounds.E_S < 0) throw config_error("bounds must be non-negative");
  const double c = ledger.c_const;
  const double I_S = Tstar * std::pow(bounds.D_S, 4) +
                     std::sqrt(Tstar * bounds.D_S * bounds.D_S) * bounds.E_S;
  const double delta = c * std::pow(Tstar, -0.25) * std::exp(-c * I_S);
  if (delta <= 0.0 || !std::isfinite(delta))
    throw infeasible_delta_error("robustness radius underflowed to zero");
  return delta;
}

// Empirical stand-in for the uniform bounds: the proof of their existence is
// non-constructive, so they are instantiated from pilot trajectories and a
// safety factor, with provenance stamped into every downstream report.
inline UniformBounds empirical_bounds(const std::vector<Trajectory>& pilots,
                                      double safety_factor = 2.0) {
  if (pilots.empty()) throw config_error("empirical bounds need at least one trajectory");
  if (!(safety_factor >= 1.0)) throw config_error("safety factor must be >= 1");
  double worst_D = 0.0, worst_E = 0.0;
  for (const auto& traj : pilots) {
    std::vector<double> h2(traj.fields.size());
    double peak = 0.0;
    for (std::size_t j = 0; j < traj.fields.size(); ++j) {
      const Norms n = traj.fields[j].norms();
      peak = std::max(peak, n.enstrophy);
      h2[j] = n.h2;
    }
    worst_D = std::max(worst_D, std::sqrt(peak));
    worst_E = std::max(worst_E, trapezoid(traj.times, h2));
  }
  return UniformBounds{safety_factor * worst_D, safety_factor * worst_E,
                       BoundsProvenance::empirical, safety_factor};
}

struct GevreyReduction {
  double tau = 0.0;
  double S = 0.0;
};

// tau = (1/K1)(1+R^2)^{-2}; S = K1 (1+R^2)^{5/2}. After time tau every
// solution from the V ball of radius R has entered the H2 ball of radius S.
inline GevreyReduction gevrey_reduction(double R, const ConstantsLedger& ledger = {}) {
  if (!(R > 0)) throw config_error("gevrey_reduction needs R > 0");
  const double one_plus = 1.0 + R * R;
  return GevreyReduction{1.0 / (ledger.K1 * one_plus * one_plus),
                         ledger.K1 * std::pow(one_plus, 2.5)};
}

// Checks ||A^{1/2} e^{tA^{1/2}} u(t)||^2 <= 2 (1 + ||Du0||^2) on the stored
// samples with t <= 2 tau. Diagnostic corroborating the reduction.
inline bool gevrey_bound_check(const Trajectory& traj, double tau) {
  if (!(tau > 0)) throw config_error("gevrey_bound_check needs tau > 0");
  if (!traj.spans(2.0 * tau))
    throw error("trajectory does not span [0, 2 tau]");
  const double bound = 2.0 * (1.0 + traj.fields.front().enstrophy());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    if (t > 2.0 * tau + 1e-12) break;
    if (traj.fields[j].gevrey_norm(t) > bound * (1.0 + 1e-9) + 1e-12) return false;
  }
  return true;
}

}  // namespace enscert
