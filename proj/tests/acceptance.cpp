// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one PASS/FAIL line. The process exits nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "enscert/enscert.hpp"

using namespace enscert;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s: criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  try {
    const auto [pass, detail] = fn();
    report(id, name, pass, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kFourPiCubed = 4.0 * M_PI * M_PI * M_PI;

// --- criterion 1: exact-solution oracle ------------------------------------

std::pair<bool, std::string> exact_solution_oracle() {
  const SpectralField u0 = shear_field(1.0, 8);
  StokesBasis basis;
  IntegratorConfig ic;
  ic.dt = 1e-3;
  ic.scheme = TimeScheme::integrating_factor_rk4;
  ic.n_modes = basis.count_lambda_at_most(64);  // the full K = 8 container
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj = integrate(u0, 1.0, ic);
  const double elapsed = seconds_since(t0);
  SpectralField expect = u0;
  expect.scale(std::exp(-1.0));
  const double err = std::sqrt(diff_norms(traj.fields.back(), expect).enstrophy);
  std::ostringstream os;
  os << "err=" << err << " (tol 1e-8), runtime=" << elapsed << "s (limit 10s)";
  return {err <= 1e-8 && elapsed < 10.0, os.str()};
}

// --- criterion 2: constants check -------------------------------------------

std::pair<bool, std::string> constants_check() {
  const ConstantsLedger constants;
  const double rv = constants.small_data_radius_v();
  std::ostringstream os;
  os << "R_V=" << rv << " (required [0.0069, 0.0073])";
  return {rv >= 0.0069 && rv <= 0.0073, os.str()};
}

// --- criterion 3: bilinear-term oracle ---------------------------------------

std::pair<bool, std::string> bilinear_oracle() {
  FieldSampler s(31415);
  double worst_diff = 0.0, worst_ortho = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SpectralField u = s.random_field_with_enstrophy(3, 1.0);
    const SpectralField bp = nonlinear_term(u, NonlinearMode::pseudospectral);
    const SpectralField bd = nonlinear_term(u, NonlinearMode::direct_convolution);
    worst_diff = std::max(worst_diff, std::sqrt(diff_norms(bp, bd).enstrophy));
    const Norms n = u.norms();
    worst_ortho = std::max(
        worst_ortho, std::abs(l2_inner(bp, u)) / (std::sqrt(n.energy) * n.enstrophy));
  }
  std::ostringstream os;
  os << "max |B_ps - B_direct|_V = " << worst_diff << " (tol 1e-12), max <B,u> rel = "
     << worst_ortho << " (tol 1e-12)";
  return {worst_diff <= 1e-12 && worst_ortho <= 1e-12, os.str()};
}

// --- criterion 4: energy identity --------------------------------------------

std::pair<bool, std::string> energy_identity() {
  FieldSampler s(2718);
  StokesBasis basis;
  IntegratorConfig ic;
  ic.dt = 1e-3;
  ic.n_modes = basis.count_lambda_at_most(4);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField u0 = s.random_field_with_enstrophy(2, 1e-4 * (trial + 1));
    const Trajectory traj = integrate(u0, 1.0, ic);
    worst = std::max(worst, energy_identity_defect(traj) / traj.fields.front().energy());
  }
  std::ostringstream os;
  os << "max relative defect = " << worst << " (tol 1e-8), 20 fields";
  return {worst <= 1e-8, os.str()};
}

// --- criterion 5: small-data enstrophy monotonicity ---------------------------

std::pair<bool, std::string> small_data_monotonicity() {
  FieldSampler s(9001);
  const ConstantsLedger constants;
  StokesBasis basis;
  IntegratorConfig ic;
  ic.dt = 1e-3;
  ic.n_modes = basis.count_lambda_at_most(4);
  double worst_uptick = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double target =
        constants.small_data_enstrophy_threshold() * double(trial + 1) / 20.0;
    const SpectralField u0 = s.random_field_with_enstrophy(2, target);
    const Trajectory traj = integrate(u0, 0.5, ic);
    for (std::size_t j = 0; j + 1 < traj.fields.size(); ++j)
      worst_uptick = std::max(
          worst_uptick, traj.fields[j + 1].enstrophy() - traj.fields[j].enstrophy());
  }
  std::ostringstream os;
  os << "max per-step enstrophy increase = " << worst_uptick << " (tol 1e-10), 20 fields";
  return {worst_uptick <= 1e-10, os.str()};
}

// --- criterion 6: certificate monotone refinement -----------------------------

std::pair<bool, std::string> certificate_refinement() {
  SpectralField u0 = shear_field(1.0);
  scale_to_enstrophy(u0, 2.1e-7);
  const double Tstar = 1.0;
  IntegratorConfig ic;
  ic.n_modes = 12;

  std::vector<double> lhs_values;
  Verdict coarse = Verdict::certified, fine = Verdict::inconclusive;
  for (const double dt : {0.5, 0.1, 0.01, 0.001}) {
    ic.dt = dt;
    const Trajectory traj = integrate(u0, Tstar, ic);
    const CertificateReport rep = evaluate_certificate(u0, traj, Tstar);
    lhs_values.push_back(rep.lhs);
    if (dt == 0.5) coarse = rep.verdict;
    if (dt == 0.001) fine = rep.verdict;
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < lhs_values.size(); ++i)
    decreasing = decreasing && lhs_values[i + 1] < lhs_values[i];
  std::ostringstream os;
  os << "verdicts: dt=0.5 " << to_string(coarse) << ", dt=1e-3 " << to_string(fine)
     << "; lhs = {" << lhs_values[0] << ", " << lhs_values[1] << ", " << lhs_values[2]
     << ", " << lhs_values[3] << "}";
  return {coarse == Verdict::inconclusive && fine == Verdict::certified && decreasing,
          os.str()};
}

// --- criterion 7: covering completeness ---------------------------------------

std::uint64_t brute_count(int N, int M, double S) {
  if (N == 0) return 1;
  const double R = std::ldexp(S, M);
  const long b = long(std::floor(R + 1e-12));
  std::uint64_t count = 0;
  const std::function<void(int, double)> rec = [&](int depth, double sum) {
    if (depth == N) {
      if (sum <= R * R + 1e-12) ++count;
      return;
    }
    for (long v = -b; v <= b; ++v) rec(depth + 1, sum + double(v) * double(v));
  };
  rec(0, 0.0);
  return count;
}

std::pair<bool, std::string> covering_completeness() {
  struct Config {
    double S, delta;
  };
  const Config configs[] = {{0.1, 0.2}, {1.0, 1.8}, {0.55, 1.05}};
  bool pass = true;
  std::ostringstream os;

  FieldSampler s(777);
  StokesBasis basis;
  for (const Config& cfg : configs) {
    const std::int64_t N = choose_N(cfg.S, cfg.delta);
    const int M = choose_M(N, cfg.delta);
    const LatticeSpec spec{N, M, cfg.S, cfg.delta};

    std::vector<std::vector<double>> lattice;
    enumerate_lattice(spec, [&](std::uint64_t, const std::vector<double>& a,
                                const SpectralField&) { lattice.push_back(a); });

    std::vector<double> lambdas(static_cast<std::size_t>(N));
    if (N > 0) {
      basis.extend_to_count(N);
      for (std::int64_t j = 1; j <= N; ++j)
        lambdas[std::size_t(j - 1)] = basis.element(j).lambda;
    }
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double radius = cfg.S * std::cbrt(s.uniform());  // ||Av|| <= S
      const SpectralField v = s.random_field_with_h2(1, radius * radius);
      std::vector<double> beta(static_cast<std::size_t>(N));
      for (std::int64_t j = 1; j <= N; ++j) beta[std::size_t(j - 1)] = basis.coefficient(v, j);
      double tail2 = v.norms().enstrophy;
      if (N > 0) {
        const SpectralField pv = basis.project_n(v, N);
        tail2 = diff_norms(v, pv).enstrophy;
      }
      double best = 1e300;
      for (const auto& alpha : lattice) {
        double span2 = 0;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
          const double d = beta[j] - alpha[j];
          span2 += lambdas[j] * d * d;
        }
        best = std::min(best, span2 + tail2);
      }
      worst = std::max(worst, std::sqrt(best));
    }
    pass = pass && worst <= cfg.delta;
    os << "(S=" << cfg.S << ", delta=" << cfg.delta << ", N=" << N << ", M=" << M
       << ", count=" << lattice.size() << ", worst=" << worst << ") ";
  }

  bool counts_ok = true;
  for (int N = 0; N <= 3; ++N)
    for (int M = 0; M <= 2; ++M)
      for (const double S : {0.5, 1.0, 1.3})
        counts_ok = counts_ok &&
                    count_lattice(LatticeSpec{N, M, S, 1.0}) == brute_count(N, M, S);
  os << (counts_ok ? "counts match brute force for N<=3, M<=2"
                   : "COUNT MISMATCH vs brute force");
  return {pass && counts_ok, os.str()};
}

// --- criterion 8: Gevrey formulas ----------------------------------------------

std::pair<bool, std::string> gevrey_formulas() {
  const ConstantsLedger constants;
  const GevreyReduction near_zero = gevrey_reduction(1e-12, constants);
  const bool tau_ok = std::abs(near_zero.tau - 1.0 / 3266.0) <= 1e-9 * near_zero.tau;
  const bool S_ok = std::abs(near_zero.S - 3266.0) <= 1e-9 * near_zero.S;

  const SpectralField u0 = shear_field(1.0);
  const double tau = 1.0 / (constants.K1 * std::pow(1.0 + u0.enstrophy(), 2.0));
  IntegratorConfig ic;
  ic.dt = tau / 10.0;
  ic.n_modes = 12;
  const Trajectory traj = integrate(u0, 2.0 * tau, ic);
  const bool bound_ok = gevrey_bound_check(traj, tau);

  std::ostringstream os;
  os << "tau(0+)=" << near_zero.tau << " S(0+)=" << near_zero.S
     << ", shear bound check over [0, 2*tau]: " << (bound_ok ? "holds" : "violated");
  return {tau_ok && S_ok && bound_ok, os.str()};
}

// --- criterion 9: end-to-end desk campaign --------------------------------------

struct CliResult {
  int exit_code = -1;
};

CliResult run_cli(const std::string& binary, const std::string& args) {
  const std::string cmd = binary + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return CliResult{WIFEXITED(rc) ? WEXITSTATUS(rc) : -1};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<bool, std::string> desk_campaign() {
  const char* bin = std::getenv("ENSTROPHY_CERT_BIN");
  if (!bin) return {false, "ENSTROPHY_CERT_BIN is not set"};

  const fs::path dir =
      fs::temp_directory_path() / ("enscert_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string toy_flags =
      " --const-c 2.2 --tstar 1 --bound-d 0.01 --bound-e 0.01 --lattice-rule paper"
      " --resolution 2 --dt 1e-3";

  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out_a = dir / "full.json";
  const CliResult full =
      run_cli(bin, "verify-ball h2 1.25" + toy_flags + " --checkpoint " +
                       (dir / "full.ckpt").string() + " --output " + out_a.string());
  const double elapsed = seconds_since(t0);

  const CliResult interrupted =
      run_cli(bin, "verify-ball h2 1.25" + toy_flags + " --checkpoint " +
                       (dir / "resume.ckpt").string() + " --stop-after 12");
  const fs::path out_b = dir / "resumed.json";
  const CliResult resumed =
      run_cli(bin, "verify-ball h2 1.25" + toy_flags + " --checkpoint " +
                       (dir / "resume.ckpt").string() + " --output " + out_b.string());

  const std::string report_a = slurp(out_a);
  const bool byte_identical = !report_a.empty() && report_a == slurp(out_b);

  std::uint64_t count = 0;
  bool certified = false;
  if (!report_a.empty()) {
    const Json j = Json::parse(report_a);
    count = j.at("lattice").at("count").get<std::uint64_t>();
    certified = j.at("summary").at("ball_certified").get<bool>();
  }

  std::ostringstream os;
  os << "count=" << count << " (limit 100), exits " << full.exit_code << "/"
     << interrupted.exit_code << "/" << resumed.exit_code
     << " (expect 0/6/0), byte-identical=" << (byte_identical ? "yes" : "NO")
     << ", runtime=" << elapsed << "s (limit 300s)";
  const bool pass = full.exit_code == 0 && interrupted.exit_code == 6 &&
                    resumed.exit_code == 0 && byte_identical && certified &&
                    count > 1 && count <= 100 && elapsed < 300.0;
  return {pass, os.str()};
}

// --- criterion 10: scaling round-trip --------------------------------------------

std::pair<bool, std::string> scaling_round_trip() {
  FieldSampler s(424242);
  const PhysicalDomain dom{1.0, 0.01};
  const ConstantsLedger constants;

  double worst_rel = 0.0;
  bool verdicts_ok = true;
  ConstantsLedger phys = constants;
  phys.nu = dom.nu;
  phys.lambda1 = dom.lambda1();
  const double threshold = phys.small_data_enstrophy_threshold();

  for (const double fraction : {0.3, 0.9, 1.2, 10.0}) {
    SpectralField physical = s.random_field(2);
    physical.scale(
        std::sqrt(fraction * threshold / physical_norms(physical, dom).enstrophy));
    const SpectralField back = dimensionalize(nondimensionalize(physical, dom), dom);
    physical.for_each_canonical([&](const Wavevector& k, const Vec3c& c) {
      const Vec3c b = back.coeff(k);
      for (int i = 0; i < 3; ++i)
        if (std::abs(c[i]) > 0)
          worst_rel = std::max(worst_rel, std::abs(b[i] - c[i]) / std::abs(c[i]));
    });
    const bool phys_verdict = small_data_check_physical(physical, dom, constants);
    const bool nd_verdict = small_data_check(nondimensionalize(physical, dom), constants);
    verdicts_ok = verdicts_ok && phys_verdict == nd_verdict &&
                  phys_verdict == (fraction < 1.0);
  }
  std::ostringstream os;
  os << "max relative coefficient error = " << worst_rel
     << " (tol 1e-14), verdicts preserved = " << (verdicts_ok ? "yes" : "NO");
  return {worst_rel <= 1e-14 && verdicts_ok, os.str()};
}

}  // namespace

int main() {
  run(1, "exact-solution oracle (shear mode at K = 8)", exact_solution_oracle);
  run(2, "constants check (R_V = c^{-1/4})", constants_check);
  run(3, "bilinear-term oracle (pseudospectral vs direct convolution)", bilinear_oracle);
  run(4, "energy identity", energy_identity);
  run(5, "small-data enstrophy monotonicity", small_data_monotonicity);
  run(6, "certificate monotone refinement", certificate_refinement);
  run(7, "covering completeness and lattice counts", covering_completeness);
  run(8, "Gevrey reduction formulas and bound check", gevrey_formulas);
  run(9, "end-to-end desk campaign with kill-and-resume", desk_campaign);
  run(10, "scaling round-trip", scaling_round_trip);

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
