// Time integration of the Galerkin system du/dt + Au + P_n B(u,u) = 0 and
// the piecewise-linear trajectory interpolant used by the certificate.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "enscert/errors.hpp"
#include "enscert/format.hpp"
#include "enscert/nonlinear.hpp"
#include "enscert/spectral_field.hpp"
#include "enscert/stokes_basis.hpp"

namespace enscert {

enum class TimeScheme { integrating_factor_rk4, explicit_rk4 };

struct IntegratorConfig {
  double dt = 1e-3;
  TimeScheme scheme = TimeScheme::integrating_factor_rk4;
  std::int64_t n_modes = 12;
  std::int64_t store_every = 1;

  void validate() const {
    if (!(dt > 0)) throw config_error("dt must be positive");
    if (n_modes < 1) throw config_error("n_modes must be >= 1");
    if (store_every < 1) throw config_error("store_every must be >= 1");
  }
};

inline constexpr double kBlowupEnstrophyGuard = 1e12;

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;
  std::int64_t n_modes = 0;
  double dt_nominal = 0.0;

  double final_time() const { return times.empty() ? 0.0 : times.back(); }
  bool spans(double T, double tol = 1e-9) const {
    return !times.empty() && times.front() == 0.0 && final_time() >= T - tol;
  }
};

// Linear interpolation of coefficients between bracketing stored times.
inline SpectralField interpolant(const Trajectory& traj, double t) {
  if (traj.times.empty()) throw error("interpolant on an empty trajectory");
  const double T = traj.final_time();
  const double tol = 1e-12 * (1.0 + std::abs(T));
  if (t < traj.times.front() - tol || t > T + tol)
    throw out_of_range_error("interpolation time outside the trajectory span");
  t = std::clamp(t, traj.times.front(), T);
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  std::size_t j = (it == traj.times.begin()) ? 0 : std::size_t(it - traj.times.begin()) - 1;
  if (j + 1 >= traj.times.size()) j = traj.times.size() - 2;
  if (traj.times.size() == 1) return traj.fields.front();
  const double h = traj.times[j + 1] - traj.times[j];
  const double theta = (t - traj.times[j]) / h;
  SpectralField out = traj.fields[j];
  out.scale(1.0 - theta);
  out.axpy(theta, traj.fields[j + 1]);
  return out;
}

namespace detail {

// Per-eigenvalue exponential factors, indexed by the integer |k|^2.
class SpectralFactors {
 public:
  SpectralFactors(long lambda_max, double h)
      : table_(std::size_t(lambda_max) + 1, 1.0) {
    for (long lam = 0; lam <= lambda_max; ++lam)
      table_[std::size_t(lam)] = std::exp(-double(lam) * h);
  }
  void apply(SpectralField& u) const {
    u.apply_spectral([this](double lam) { return table_[std::size_t(lam)]; });
  }

 private:
  std::vector<double> table_;
};

}  // namespace detail

class GalerkinSolver {
 public:
  GalerkinSolver(const IntegratorConfig& config) : config_(config) {
    config_.validate();
    basis_.extend_to_count(config_.n_modes);
    lambda_max_ = long(basis_.element(config_.n_modes).lambda);
    radius_ = basis_.radius_for_count(config_.n_modes);
    const double guard =
        (config_.scheme == TimeScheme::integrating_factor_rk4) ? 1000.0 : 2.8;
    if (config_.dt * double(lambda_max_) > guard)
      throw config_error("stability guard violated: dt * lambda_max too large");
  }

  std::int64_t n_modes() const { return config_.n_modes; }
  int container_radius() const { return radius_; }
  long lambda_max() const { return lambda_max_; }

  // P_n u0, represented at the solver's container radius.
  SpectralField initial_state(const SpectralField& u0) {
    SpectralField pn = basis_.project_n(u0, config_.n_modes);
    return (pn.truncation_radius() == radius_) ? pn : pn.embedded(radius_);
  }

  Trajectory integrate(const SpectralField& u0, double T) {
    if (!(T > 0)) throw config_error("final time must be positive");
    SpectralField state = initial_state(u0);

    const double dt = config_.dt;
    const std::int64_t m = std::max<std::int64_t>(1, std::int64_t(std::ceil(T / dt - 1e-9)));

    Trajectory traj;
    traj.n_modes = config_.n_modes;
    traj.dt_nominal = dt;
    traj.times.push_back(0.0);
    traj.fields.push_back(state);

    double have_h = -1.0;
    detail::SpectralFactors half(0, 0), full(0, 0);
    for (std::int64_t j = 0; j < m; ++j) {
      const double t0 = double(j) * dt;
      const double t1 = (j + 1 == m) ? T : double(j + 1) * dt;
      const double h = t1 - t0;
      if (h != have_h) {
        // Table covers every eigenvalue in the container cube, not just
        // the Galerkin span; masked modes are zero but still visited.
        const long table_max = 3L * radius_ * radius_;
        half = detail::SpectralFactors(table_max, h / 2.0);
        full = detail::SpectralFactors(table_max, h);
        have_h = h;
      }
      state = (config_.scheme == TimeScheme::integrating_factor_rk4)
                  ? step_if_rk4(state, h, half, full)
                  : step_explicit_rk4(state, h);
      state.leray_project();
      state = basis_.project_n(state, config_.n_modes);
      const double ens = state.enstrophy();
      if (!(ens <= kBlowupEnstrophyGuard))
        throw divergence_error("numerical state exceeded the blow-up guard", t1, ens);
      if ((j + 1) % config_.store_every == 0 || j + 1 == m) {
        traj.times.push_back(t1);
        traj.fields.push_back(state);
      }
    }
    return traj;
  }

 private:
  // -P_n B(u,u), the nonlinear part of the right-hand side.
  SpectralField nonlinear_rhs(const SpectralField& u) {
    SpectralField b = nonlinear_term(u, NonlinearMode::pseudospectral, radius_);
    SpectralField pb = basis_.project_n(b, config_.n_modes);
    pb.scale(-1.0);
    if (pb.truncation_radius() != radius_) pb = pb.embedded(radius_);
    return pb;
  }

  SpectralField step_if_rk4(const SpectralField& u, double h,
                            const detail::SpectralFactors& E,
                            const detail::SpectralFactors& E2) {
    SpectralField k1 = nonlinear_rhs(u);

    SpectralField u2 = u;
    u2.axpy(h / 2.0, k1);
    E.apply(u2);
    SpectralField k2 = nonlinear_rhs(u2);

    SpectralField Eu = u;
    E.apply(Eu);
    SpectralField u3 = Eu;
    u3.axpy(h / 2.0, k2);
    SpectralField k3 = nonlinear_rhs(u3);

    SpectralField E2u = u;
    E2.apply(E2u);
    SpectralField Ek3 = k3;
    E.apply(Ek3);
    SpectralField u4 = E2u;
    u4.axpy(h, Ek3);
    SpectralField k4 = nonlinear_rhs(u4);

    SpectralField next = E2u;
    E2.apply(k1);
    next.axpy(h / 6.0, k1);
    E.apply(k2);
    next.axpy(h / 3.0, k2);
    next.axpy(h / 3.0, Ek3);
    next.axpy(h / 6.0, k4);
    return next;
  }

  SpectralField full_rhs(const SpectralField& u) {
    SpectralField out = nonlinear_rhs(u);
    SpectralField au = u;
    au.apply_spectral([](double lam) { return lam; });
    out.axpy(-1.0, au);
    return out;
  }

  SpectralField step_explicit_rk4(const SpectralField& u, double h) {
    SpectralField k1 = full_rhs(u);
    SpectralField u2 = u;
    u2.axpy(h / 2.0, k1);
    SpectralField k2 = full_rhs(u2);
    SpectralField u3 = u;
    u3.axpy(h / 2.0, k2);
    SpectralField k3 = full_rhs(u3);
    SpectralField u4 = u;
    u4.axpy(h, k3);
    SpectralField k4 = full_rhs(u4);
    SpectralField next = u;
    next.axpy(h / 6.0, k1);
    next.axpy(h / 3.0, k2);
    next.axpy(h / 3.0, k3);
    next.axpy(h / 6.0, k4);
    return next;
  }

  IntegratorConfig config_;
  StokesBasis basis_;
  long lambda_max_ = 1;
  int radius_ = 1;
};

inline Trajectory integrate(const SpectralField& u0, double T, const IntegratorConfig& config) {
  GalerkinSolver solver(config);
  return solver.integrate(u0, T);
}

// --- quadrature over stored samples ---------------------------------------

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j)
    s += 0.5 * (y[j] + y[j + 1]) * (t[j + 1] - t[j]);
  return s;
}

// Composite Simpson where spacing allows, trapezoid for the leftovers.
inline double simpson(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 3) return trapezoid(t, y);
  double s = 0;
  std::size_t j = 0;
  while (j + 2 < n) {
    const double h1 = t[j + 1] - t[j];
    const double h2 = t[j + 2] - t[j + 1];
    if (std::abs(h1 - h2) <= 1e-12 * (h1 + h2)) {
      s += (h1 + h2) / 6.0 * (y[j] + 4.0 * y[j + 1] + y[j + 2]);
      j += 2;
    } else {
      s += 0.5 * (y[j] + y[j + 1]) * h1;
      j += 1;
    }
  }
  while (j + 1 < n) {
    s += 0.5 * (y[j] + y[j + 1]) * (t[j + 1] - t[j]);
    j += 1;
  }
  return s;
}

// Defect of the Galerkin energy identity ||u(T)||^2 + 2 int ||Du||^2 = ||u(0)||^2.
inline double energy_identity_defect(const Trajectory& traj) {
  std::vector<double> enst(traj.fields.size());
  for (std::size_t j = 0; j < traj.fields.size(); ++j)
    enst[j] = traj.fields[j].enstrophy();
  const double e0 = traj.fields.front().energy();
  const double eT = traj.fields.back().energy();
  return std::abs(eT + 2.0 * simpson(traj.times, enst) - e0);
}

inline void write_series_csv(std::ostream& os, const Trajectory& traj, bool with_gevrey) {
  os << "t,energy,enstrophy,h2";
  if (with_gevrey) os << ",gevrey";
  os << "\n";
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const Norms n = traj.fields[j].norms();
    os << format_double(traj.times[j]) << "," << format_double(n.energy) << ","
       << format_double(n.enstrophy) << "," << format_double(n.h2);
    if (with_gevrey) os << "," << format_double(traj.fields[j].gevrey_norm(traj.times[j]));
    os << "\n";
  }
}

}  // namespace enscert
