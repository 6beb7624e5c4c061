// enstrophy-cert: certify regularity of Navier-Stokes initial data on the
// periodic torus, point by point or over covering lattices of whole balls.
//
// Subcommands: certify-one, verify-ball, lattice-info, emit-series,
// make-field (auxiliary input generator). Exit codes are a stable contract:
//   0 certified / success        2 inconclusive (completed, not certified)
//   3 diverged or resolution failure
//   4 infeasible robustness radius
//   5 lattice count cap exceeded 6 interrupted (checkpoint is resumable)
//   64 usage, malformed input, or checkpoint mismatch

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "enscert/enscert.hpp"

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitInconclusive = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitInfeasibleDelta = 4;
constexpr int kExitCountCap = 5;
constexpr int kExitInterrupted = 6;
constexpr int kExitUsage = 64;

struct CommonOptions {
  enscert::RunConfig config;
  double const_c = 0.0;   // 0 = default
  double const_k1 = 0.0;  // 0 = default
  double tstar = 0.0;     // 0 = derive
  std::uint64_t stop_after = std::uint64_t(-1);
  double bound_d = -1.0, bound_e = -1.0;
  std::string lattice_rule = "safe";
  std::string scheme = "integrating_factor_rk4";
};

// Flat TOML-style key=value config file. Loaded before flag parsing, so
// values act as defaults and command-line flags override them.
void apply_config_entry(const std::string& key, const std::string& value,
                        CommonOptions& opt) {
  try {
    if (key == "resolution") opt.config.resolution = std::stoi(value);
    else if (key == "modes") opt.config.n_modes = std::stoll(value);
    else if (key == "dt") opt.config.dt = std::stod(value);
    else if (key == "store-every") opt.config.store_every = std::stoll(value);
    else if (key == "tstar") opt.tstar = std::stod(value);
    else if (key == "const-c") opt.const_c = std::stod(value);
    else if (key == "const-k1") opt.const_k1 = std::stod(value);
    else if (key == "workers") opt.config.workers = unsigned(std::stoul(value));
    else if (key == "checkpoint") opt.config.checkpoint_path = value;
    else if (key == "safety-factor") opt.config.safety_factor = std::stod(value);
    else if (key == "count-cap") opt.config.count_cap = std::stoull(value);
    else if (key == "pilot-samples") opt.config.pilot_samples = std::stoi(value);
    else if (key == "pilot-seed") opt.config.pilot_seed = std::stoull(value);
    else if (key == "bound-d") opt.bound_d = std::stod(value);
    else if (key == "bound-e") opt.bound_e = std::stod(value);
    else if (key == "lattice-rule") opt.lattice_rule = value;
    else if (key == "stop-after") opt.stop_after = std::stoull(value);
    else if (key == "scheme") opt.scheme = value;
    else throw enscert::config_error("config file: unknown key: " + key);
  } catch (const std::invalid_argument&) {
    throw enscert::config_error("config file: bad value for " + key + ": " + value);
  } catch (const std::out_of_range&) {
    throw enscert::config_error("config file: bad value for " + key + ": " + value);
  }
}

void load_config_file(const std::string& path, CommonOptions& opt) {
  std::ifstream in(path);
  if (!in.good()) throw enscert::config_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == ';' || line[start] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw enscert::config_error("config file: expected key=value: " + line);
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\"");
      const auto b = s.find_last_not_of(" \t\r\"");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    apply_config_entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), opt);
  }
}

// The config path can appear anywhere on the command line; the environment
// variable is the fallback.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  if (const char* env = std::getenv("ENSTROPHY_CERT_CONFIG")) return env;
  return {};
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  static std::string config_path_sink;
  cmd->add_option("--config", config_path_sink,
                  "TOML-style key=value config file (flags override its values)");
  cmd->add_option("--resolution", opt.config.resolution,
                  "Truncation radius K of working fields (default 8)");
  cmd->add_option("--modes", opt.config.n_modes,
                  "Galerkin dimension n (default: all eigenvalues <= K^2)");
  cmd->add_option("--dt", opt.config.dt, "Time step (default 1e-3)");
  cmd->add_option("--store-every", opt.config.store_every,
                  "Trajectory thinning stride (default 1)");
  cmd->add_option("--tstar", opt.tstar, "Override of the verification horizon T*");
  cmd->add_option("--const-c", opt.const_c, "Override of the constant c");
  cmd->add_option("--const-k1", opt.const_k1, "Override of the Gevrey constant K1");
  cmd->add_option("--workers", opt.config.workers,
                  "Worker threads (default: available parallelism)");
  cmd->add_option("--checkpoint", opt.config.checkpoint_path, "Campaign checkpoint file");
  cmd->add_option("--safety-factor", opt.config.safety_factor,
                  "Safety factor on empirical bounds (default 2)");
  cmd->add_option("--count-cap", opt.config.count_cap,
                  "Refuse lattices larger than this (default 1e7)");
  cmd->add_option("--pilot-samples", opt.config.pilot_samples,
                  "Pilot integrations for empirical bounds (default 16)");
  cmd->add_option("--pilot-seed", opt.config.pilot_seed, "Seed for pilot sampling");
  cmd->add_option("--bound-d", opt.bound_d,
                  "User-supplied uniform bound D_S (with --bound-e skips pilots)");
  cmd->add_option("--bound-e", opt.bound_e, "User-supplied uniform bound E_S");
  cmd->add_option("--lattice-rule", opt.lattice_rule,
                  "Covering criteria: safe (default) or paper (comparison mode)")
      ->check(CLI::IsMember({"safe", "paper"}));
  cmd->add_option("--stop-after", opt.stop_after,
                  "Stop after checkpointing this many new points (testing/ops hook)");
  cmd->add_option("--scheme", opt.scheme,
                  "Time scheme: integrating_factor_rk4 (default) or explicit_rk4")
      ->check(CLI::IsMember({"integrating_factor_rk4", "explicit_rk4"}));
}

void finalize_config(CommonOptions& opt) {
  opt.config.scheme = (opt.scheme == "explicit_rk4") ? enscert::TimeScheme::explicit_rk4
                                                     : enscert::TimeScheme::integrating_factor_rk4;
  if (opt.const_c > 0) opt.config.constants.c_const = opt.const_c;
  if (opt.const_k1 > 0) opt.config.constants.K1 = opt.const_k1;
  if (opt.tstar > 0) opt.config.t_star_override = opt.tstar;
  if (opt.stop_after != std::uint64_t(-1)) opt.config.stop_after_points = opt.stop_after;
  if (opt.bound_d >= 0 || opt.bound_e >= 0) {
    if (opt.bound_d < 0 || opt.bound_e < 0)
      throw enscert::config_error("--bound-d and --bound-e must be given together");
    opt.config.bounds_override = enscert::UniformBounds{
        opt.bound_d, opt.bound_e, enscert::BoundsProvenance::user_supplied, 1.0};
  }
  opt.config.lattice_rule = (opt.lattice_rule == "paper") ? enscert::LatticeRule::paper
                                                          : enscert::LatticeRule::safe;
}

enscert::SpectralField load_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good())
    throw enscert::malformed_field_error("cannot open field file: " + path);
  return enscert::read_field(in);
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(output_path);
    if (!out.good()) throw enscert::error("cannot open output file: " + output_path);
    out << text << "\n";
  }
}

int cmd_certify_one(const std::string& field_path, CommonOptions& opt,
                    const std::string& output_path) {
  finalize_config(opt);
  const enscert::SpectralField u0 = load_field_file(field_path);
  try {
    const enscert::CertificateReport rep = enscert::certify_one(u0, opt.config);
    emit(enscert::to_json(rep).dump(2), output_path);
    return rep.verdict == enscert::Verdict::certified ? kExitCertified : kExitInconclusive;
  } catch (const enscert::divergence_error& e) {
    std::cerr << "diverged: " << e.what() << " (t = " << e.time << ")\n";
    return kExitDiverged;
  } catch (const enscert::resolution_error& e) {
    std::cerr << "resolution failure: " << e.what() << "\n";
    return kExitDiverged;
  }
}

int cmd_verify_ball(const std::string& space, double radius, CommonOptions& opt,
                    const std::string& output_path) {
  finalize_config(opt);
  if (opt.config.checkpoint_path.empty()) opt.config.checkpoint_path = "campaign.ckpt";
  try {
    const enscert::CampaignState st = (space == "h2")
                                          ? enscert::verify_ball_h2(radius, opt.config)
                                          : enscert::verify_ball_v(radius, opt.config);
    if (st.interrupted) {
      std::cerr << "interrupted after " << st.points.size() << "/" << st.count
                << " points; checkpoint is resumable\n";
      return kExitInterrupted;
    }
    emit(enscert::campaign_report_json(st).dump(2), output_path);
    return st.ball_certified() ? kExitCertified : kExitInconclusive;
  } catch (const enscert::infeasible_delta_error& e) {
    std::cerr << "infeasible delta: " << e.what() << "\n";
    return kExitInfeasibleDelta;
  } catch (const enscert::count_cap_error& e) {
    std::cerr << "count cap exceeded: " << e.what() << "\n";
    return kExitCountCap;
  }
}

int cmd_lattice_info(double S, double delta, std::int64_t n_override, int m_override,
                     CommonOptions& opt, const std::string& output_path) {
  finalize_config(opt);
  enscert::Json j{{"schema", "enscert-lattice-info/1"}, {"S", S}};
  if (n_override >= 0) {
    // Direct (N, M) count, bypassing the selection rules.
    enscert::LatticeSpec spec{n_override, std::max(m_override, 0), S, delta > 0 ? delta : 0.0};
    j["lattice"] = enscert::Json{{"N", spec.N}, {"M", spec.M},
                                 {"count", enscert::count_lattice(spec, opt.config.count_cap)}};
  } else {
    if (!(delta > 0)) throw enscert::config_error("lattice-info needs --delta (or --n/--m)");
    j["delta"] = delta;
    const auto describe = [&](std::int64_t n, int m) {
      enscert::Json rule{{"N", n}, {"M", m}};
      try {
        rule["count"] = enscert::count_lattice(enscert::LatticeSpec{n, m, S, delta},
                                               opt.config.count_cap);
      } catch (const enscert::count_cap_error&) {
        rule["count_exceeds_cap"] = opt.config.count_cap;
      }
      return rule;
    };
    const std::int64_t safe_n = enscert::choose_N(S, delta);
    j["safe"] = describe(safe_n, enscert::choose_M(safe_n, delta));
    j["paper"] = describe(enscert::choose_N_paper_rule(S, delta),
                          enscert::choose_M_paper_rule(delta));
  }
  emit(j.dump(2), output_path);
  return 0;
}

int cmd_emit_series(const std::string& field_path, double T, CommonOptions& opt,
                    const std::string& output_path) {
  finalize_config(opt);
  opt.config.validate();
  const enscert::SpectralField u0 = load_field_file(field_path);
  try {
    const enscert::Trajectory traj =
        enscert::integrate(u0, T, opt.config.integrator_config());
    std::ostringstream os;
    enscert::write_series_csv(os, traj, /*with_gevrey=*/true);
    if (output_path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream out(output_path);
      if (!out.good()) throw enscert::error("cannot open output file: " + output_path);
      out << os.str();
    }
    return 0;
  } catch (const enscert::divergence_error& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const enscert::out_of_range_error& e) {
    std::cerr << "out of range: " << e.what() << "\n";
    return kExitDiverged;
  }
}

int cmd_make_field(const std::string& kind, double amplitude, double enstrophy,
                   int K, std::uint64_t seed, const std::string& output_path) {
  enscert::SpectralField u(std::max(K, 1));
  if (kind == "zero") {
    // stays zero
  } else if (kind == "shear") {
    u = enscert::shear_field(amplitude, std::max(K, 1));
    if (enstrophy > 0) enscert::scale_to_enstrophy(u, enstrophy);
  } else if (kind == "random") {
    enscert::FieldSampler sampler(seed);
    u = sampler.random_field(std::max(K, 1));
    if (enstrophy > 0) enscert::scale_to_enstrophy(u, enstrophy);
    else if (amplitude > 0) u.scale(amplitude / std::sqrt(u.norms().energy));
  } else {
    throw enscert::config_error("unknown field kind: " + kind);
  }
  emit(enscert::field_to_string(u), output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin solver and regularity certification for the "
               "3D Navier-Stokes equations on the periodic torus"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string field_path, output_path, space = "h2";
  double radius = 0, S = 0, delta = 0, T = 1.0;
  std::int64_t n_override = -1;
  int m_override = -1;
  std::string kind = "shear";
  double amplitude = 1.0, enstrophy = 0.0;
  int make_K = 1;
  std::uint64_t make_seed = 1;

  CLI::App* certify = app.add_subcommand(
      "certify-one", "Certify a single initial condition from a field file");
  certify->add_option("field", field_path, "Field file")->required();
  certify->add_option("--output", output_path, "Write the JSON report here (default stdout)");
  add_common_flags(certify, opt);

  CLI::App* ball = app.add_subcommand(
      "verify-ball", "Certify every initial condition in a ball via a covering lattice");
  ball->add_option("space", space, "Ball space: h2 or v")
      ->required()
      ->check(CLI::IsMember({"h2", "v"}));
  ball->add_option("radius", radius, "Ball radius (S for h2, R for v)")->required();
  ball->add_option("--output", output_path, "Write the JSON report here (default stdout)");
  add_common_flags(ball, opt);

  CLI::App* info = app.add_subcommand(
      "lattice-info", "Report covering parameters and the lattice size; no integration");
  info->add_option("S", S, "H2 ball radius")->required();
  info->add_option("--delta", delta, "Covering radius to analyse");
  info->add_option("--n", n_override, "Directly count a lattice with this N");
  info->add_option("--m", m_override, "Dyadic refinement for --n");
  info->add_option("--output", output_path, "Write the JSON report here (default stdout)");
  add_common_flags(info, opt);

  CLI::App* series = app.add_subcommand(
      "emit-series", "Integrate a field and emit a (t,energy,enstrophy,h2,gevrey) CSV");
  series->add_option("field", field_path, "Field file")->required();
  series->add_option("--tend", T, "Final time (default 1)");
  series->add_option("--output", output_path, "Write the CSV here (default stdout)");
  add_common_flags(series, opt);

  CLI::App* make = app.add_subcommand(
      "make-field", "Write a field file: zero, shear, or a seeded random field");
  make->add_option("kind", kind, "zero | shear | random")
      ->required()
      ->check(CLI::IsMember({"zero", "shear", "random"}));
  make->add_option("--amplitude", amplitude, "Shear amplitude / L2 amplitude (default 1)");
  make->add_option("--enstrophy", enstrophy, "Rescale to this enstrophy value");
  make->add_option("--resolution", make_K, "Truncation radius (default 1)");
  make->add_option("--seed", make_seed, "Seed for random fields");
  make->add_option("--output", output_path, "Write the field here (default stdout)");

  try {
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) load_config_file(config_path, opt);
  } catch (const enscert::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (certify->parsed()) return cmd_certify_one(field_path, opt, output_path);
    if (ball->parsed()) return cmd_verify_ball(space, radius, opt, output_path);
    if (info->parsed())
      return cmd_lattice_info(S, delta, n_override, m_override, opt, output_path);
    if (series->parsed()) return cmd_emit_series(field_path, T, opt, output_path);
    if (make->parsed())
      return cmd_make_field(kind, amplitude, enstrophy, make_K, make_seed, output_path);
  } catch (const enscert::malformed_field_error& e) {
    std::cerr << "malformed field: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enscert::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enscert::checkpoint_error& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enscert::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
