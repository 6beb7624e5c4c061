// A-posteriori regularity certificate for a numerical trajectory: the
// initial gap plus residual integral is compared against the robustness
// threshold c (T*)^{-1/4} exp(-c I).
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "enscert/constants.hpp"
#include "enscert/errors.hpp"
#include "enscert/integrator.hpp"
#include "enscert/spectral_field.hpp"

namespace enscert {

using Json = nlohmann::ordered_json;

enum class Verdict { certified, inconclusive };

inline std::string to_string(Verdict v) {
  return v == Verdict::certified ? "certified" : "inconclusive";
}
inline Verdict verdict_from_string(const std::string& s) {
  if (s == "certified") return Verdict::certified;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw error("unknown verdict: " + s);
}

struct CertificateMetadata {
  std::int64_t n_modes = 0;
  double dt = 0.0;
  int quadrature_order = 2;
};

struct CertificateReport {
  double lhs = 0.0;         // ||D(v(0)-u0)|| + int ||Dr|| ds
  double rhs = 0.0;         // c (T*)^{-1/4} exp(-c I)
  Verdict verdict = Verdict::inconclusive;
  double integral_I = 0.0;  // int ||Dv||^4 + ||Dv|| ||Av|| ds
  double t_star = 0.0;
  CertificateMetadata metadata;
  // Decomposition of lhs, for diagnostics.
  double initial_gap = 0.0;
  double residual_integral = 0.0;
  ConstantsLedger constants;
  // When c is overridden the default-c verdict is reported alongside.
  std::optional<double> default_c_rhs;
  std::optional<Verdict> default_c_verdict;
};

// Finite verification horizon: T* = c^{1/2} ||u0||^2 (zero field gives the
// degenerate 0).
inline double t_star(const SpectralField& u0, const ConstantsLedger& ledger = {}) {
  return std::sqrt(ledger.c_const) * u0.energy();
}

// Small-data criterion ||Du0||^2 <= c^{-1/2} nu^2 lambda1^{1/2}.
inline bool small_data_check(const SpectralField& u0, const ConstantsLedger& ledger = {}) {
  return u0.enstrophy() <= ledger.small_data_enstrophy_threshold();
}

namespace detail {

inline constexpr double kGaussOffset = 0.28867513459481288225;  // 1/(2 sqrt(3))

// Residual r(s) = dv/dt + A v(s) + B(v(s), v(s)) at one point of the
// interval [t_j, t_{j+1}]; dv/dt is the interval's constant difference
// quotient and B is the full bilinear term, so the Galerkin tail is kept.
inline SpectralField residual_at(const Trajectory& traj, std::size_t j, double theta) {
  const SpectralField& f0 = traj.fields[j];
  const SpectralField& f1 = traj.fields[j + 1];
  const double h = traj.times[j + 1] - traj.times[j];

  SpectralField v = f0;
  v.scale(1.0 - theta);
  v.axpy(theta, f1);

  SpectralField b = nonlinear_term(v, NonlinearMode::pseudospectral);
  const int Kr = std::max(b.truncation_radius(), v.truncation_radius());
  SpectralField r = (b.truncation_radius() == Kr) ? std::move(b) : b.embedded(Kr);

  // + A v
  SpectralField av = v;
  av.apply_spectral([](double lam) { return lam; });
  av.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
    if (abs2(c) > 0.0) r.add_coeff(k, c);
  });
  // + dv/dt
  const double inv_h = 1.0 / h;
  f1.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
    const Vec3c c0 = f0.coeff(k);
    const Vec3c d{(c[0] - c0[0]) * inv_h, (c[1] - c0[1]) * inv_h, (c[2] - c0[2]) * inv_h};
    if (abs2(d) > 0.0) r.add_coeff(k, d);
  });
  return r;
}

}  // namespace detail

// Residual fields at the two-point Gauss nodes of every stored interval.
inline std::vector<std::pair<double, SpectralField>> residual_series(const Trajectory& traj) {
  if (traj.times.size() < 2)
    throw error("residual series needs at least two stored times");
  std::vector<std::pair<double, SpectralField>> out;
  out.reserve(2 * (traj.times.size() - 1));
  for (std::size_t j = 0; j + 1 < traj.times.size(); ++j) {
    const double a = traj.times[j], b = traj.times[j + 1];
    for (const double theta : {0.5 - detail::kGaussOffset, 0.5 + detail::kGaussOffset})
      out.emplace_back(a + theta * (b - a), detail::residual_at(traj, j, theta));
  }
  return out;
}

inline CertificateReport evaluate_certificate(const SpectralField& u0, const Trajectory& traj,
                                              double Tstar, const ConstantsLedger& ledger = {}) {
  if (!(Tstar > 0)) throw config_error("certificate horizon must be positive");
  if (traj.times.size() < 2) throw error("trajectory too short for a certificate");
  if (!traj.spans(Tstar))
    throw error("trajectory does not span the certificate horizon");

  CertificateReport rep;
  rep.t_star = Tstar;
  rep.constants = ledger;
  rep.metadata.n_modes = traj.n_modes;
  rep.metadata.dt = traj.dt_nominal;
  rep.metadata.quadrature_order = 2;

  rep.initial_gap = std::sqrt(diff_norms(traj.fields.front(), u0).enstrophy);

  double residual_int = 0.0;
  double integral_I = 0.0;
  const double span_tol = 1e-12 * (1.0 + Tstar);
  for (std::size_t j = 0; j + 1 < traj.times.size(); ++j) {
    const double a = traj.times[j];
    if (a >= Tstar - span_tol) break;
    const double b = std::min(traj.times[j + 1], Tstar);
    const double h_full = traj.times[j + 1] - traj.times[j];
    const double w = 0.5 * (b - a);
    for (const double xi : {0.5 - detail::kGaussOffset, 0.5 + detail::kGaussOffset}) {
      const double s = a + xi * (b - a);
      const double theta = (s - traj.times[j]) / h_full;
      const SpectralField r = detail::residual_at(traj, j, theta);
      residual_int += w * std::sqrt(r.norms().enstrophy);

      SpectralField v = traj.fields[j];
      v.scale(1.0 - theta);
      v.axpy(theta, traj.fields[j + 1]);
      const Norms nv = v.norms();
      integral_I += w * (nv.enstrophy * nv.enstrophy + std::sqrt(nv.enstrophy * nv.h2));
    }
  }

  rep.residual_integral = residual_int;
  rep.lhs = rep.initial_gap + residual_int;
  rep.integral_I = integral_I;
  const double c = ledger.c_const;
  rep.rhs = c * std::pow(Tstar, -0.25) * std::exp(-c * integral_I);
  if (!std::isfinite(rep.lhs) || !std::isfinite(integral_I))
    throw resolution_error("certificate evaluation produced a non-finite value");
  rep.verdict = (rep.lhs < rep.rhs) ? Verdict::certified : Verdict::inconclusive;

  if (!ledger.c_is_default()) {
    const double cd = ConstantsLedger::default_c();
    const double rhs_d = cd * std::pow(Tstar, -0.25) * std::exp(-cd * integral_I);
    rep.default_c_rhs = rhs_d;
    rep.default_c_verdict = (rep.lhs < rhs_d) ? Verdict::certified : Verdict::inconclusive;
  }
  return rep;
}

// Checks the enstrophy-inequality shape d/dt ||Du||^2 <= (c/nu^3)||Du||^6
// - nu lambda1 ||Du||^2 on every stored interval. Diagnostic only.
inline bool enstrophy_ode_diagnostic(const Trajectory& traj, const ConstantsLedger& ledger = {}) {
  if (traj.times.size() < 2) throw error("diagnostic needs at least two stored times");
  for (std::size_t j = 0; j + 1 < traj.times.size(); ++j) {
    const double f0 = traj.fields[j].enstrophy();
    const double f1 = traj.fields[j + 1].enstrophy();
    const double h = traj.times[j + 1] - traj.times[j];
    const double quotient = (f1 - f0) / h;
    const double cube = f0 * f0 * f0;
    const double bound = ledger.c_const / std::pow(ledger.nu, 3) * cube -
                         ledger.nu * ledger.lambda1 * f0;
    if (quotient > bound + 1e-6 * (1.0 + cube)) return false;
  }
  return true;
}

// --- JSON ------------------------------------------------------------------

inline Json to_json(const ConstantsLedger& c) {
  return Json{{"k", c.k_const}, {"c", c.c_const}, {"K1", c.K1},
              {"lambda1", c.lambda1}, {"nu", c.nu},
              {"c_is_default", c.c_is_default()}};
}

inline ConstantsLedger constants_from_json(const Json& j) {
  ConstantsLedger c;
  c.k_const = j.at("k").get<double>();
  c.c_const = j.at("c").get<double>();
  c.K1 = j.at("K1").get<double>();
  c.lambda1 = j.at("lambda1").get<double>();
  c.nu = j.at("nu").get<double>();
  return c;
}

inline Json to_json(const CertificateReport& r) {
  Json j{{"schema", "enscert-certificate/1"},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"verdict", to_string(r.verdict)},
         {"integral_I", r.integral_I},
         {"t_star", r.t_star},
         {"initial_gap", r.initial_gap},
         {"residual_integral", r.residual_integral},
         {"metadata", Json{{"n_modes", r.metadata.n_modes},
                           {"dt", r.metadata.dt},
                           {"quadrature_order", r.metadata.quadrature_order}}},
         {"constants", to_json(r.constants)}};
  if (r.default_c_rhs) {
    j["default_c"] = Json{{"rhs", *r.default_c_rhs},
                          {"verdict", to_string(*r.default_c_verdict)}};
  }
  return j;
}

inline CertificateReport certificate_from_json(const Json& j) {
  if (j.at("schema").get<std::string>() != "enscert-certificate/1")
    throw error("unknown certificate schema");
  CertificateReport r;
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.integral_I = j.at("integral_I").get<double>();
  r.t_star = j.at("t_star").get<double>();
  r.initial_gap = j.at("initial_gap").get<double>();
  r.residual_integral = j.at("residual_integral").get<double>();
  r.metadata.n_modes = j.at("metadata").at("n_modes").get<std::int64_t>();
  r.metadata.dt = j.at("metadata").at("dt").get<double>();
  r.metadata.quadrature_order = j.at("metadata").at("quadrature_order").get<int>();
  r.constants = constants_from_json(j.at("constants"));
  if (j.contains("default_c")) {
    r.default_c_rhs = j.at("default_c").at("rhs").get<double>();
    r.default_c_verdict =
        verdict_from_string(j.at("default_c").at("verdict").get<std::string>());
  }
  return r;
}

}  // namespace enscert
