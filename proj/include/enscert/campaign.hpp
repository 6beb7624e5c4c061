// Ball-verification campaigns: lattice certification over an H2 ball, the
// Gevrey-reduced V-ball variant, checkpoint persistence and resume.
#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "enscert/certificate.hpp"
#include "enscert/covering.hpp"
#include "enscert/random_field.hpp"

namespace enscert {

enum class LatticeRule { safe, paper };

inline std::string to_string(LatticeRule r) {
  return r == LatticeRule::safe ? "safe" : "paper";
}

inline std::string to_string(TimeScheme s) {
  return s == TimeScheme::integrating_factor_rk4 ? "integrating_factor_rk4" : "explicit_rk4";
}

struct RunConfig {
  int resolution = 8;        // truncation radius K of working fields
  std::int64_t n_modes = 0;  // Galerkin dimension; 0 = all eigenvalues <= K^2
  double dt = 1e-3;
  std::int64_t store_every = 1;
  TimeScheme scheme = TimeScheme::integrating_factor_rk4;
  std::optional<double> t_star_override;
  ConstantsLedger constants;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::string checkpoint_path;
  std::uint64_t count_cap = kDefaultCountCap;
  double safety_factor = 2.0;
  int pilot_samples = 16;
  std::uint64_t pilot_seed = 0x005eed2026ULL;
  std::optional<UniformBounds> bounds_override;
  LatticeRule lattice_rule = LatticeRule::safe;
  // Deterministic interruption hook: stop after this many newly certified
  // points have been checkpointed (used to exercise resume).
  std::optional<std::uint64_t> stop_after_points;

  void validate() const {
    if (resolution < 1) throw config_error("resolution must be >= 1");
    if (n_modes < 0) throw config_error("n_modes must be >= 0");
    if (!(dt > 0)) throw config_error("dt must be positive");
    if (store_every < 1) throw config_error("store_every must be >= 1");
    if (t_star_override && !(*t_star_override > 0))
      throw config_error("t_star override must be positive");
    if (!(safety_factor >= 1.0)) throw config_error("safety factor must be >= 1");
    if (pilot_samples < 1) throw config_error("pilot_samples must be >= 1");
    if (count_cap < 1) throw config_error("count cap must be >= 1");
    constants.validate();
  }

  std::int64_t effective_n_modes() const {
    if (n_modes > 0) return n_modes;
    StokesBasis basis;
    return basis.count_lambda_at_most(long(resolution) * resolution);
  }

  IntegratorConfig integrator_config() const {
    IntegratorConfig ic;
    ic.dt = dt;
    ic.scheme = scheme;
    ic.n_modes = effective_n_modes();
    ic.store_every = store_every;
    return ic;
  }

  unsigned effective_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }
};

enum class PointStatus { pending, certified, inconclusive, diverged };

inline std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::pending: return "pending";
    case PointStatus::certified: return "certified";
    case PointStatus::inconclusive: return "inconclusive";
    case PointStatus::diverged: return "diverged";
  }
  return "pending";
}
inline PointStatus point_status_from_string(const std::string& s) {
  if (s == "pending") return PointStatus::pending;
  if (s == "certified") return PointStatus::certified;
  if (s == "inconclusive") return PointStatus::inconclusive;
  if (s == "diverged") return PointStatus::diverged;
  throw error("unknown point status: " + s);
}

struct PointResult {
  std::uint64_t index = 0;
  PointStatus status = PointStatus::pending;
  std::string reason;  // "small-data", "certificate", "blow-up-guard", "resolution-failure"
  std::optional<double> lhs, rhs, integral_I;
};

struct CampaignState {
  std::string space;      // "h2" or "v"
  double radius = 0.0;    // the requested ball radius (S for h2, R for v)
  std::optional<GevreyReduction> gevrey;  // present for v campaigns
  double t_star = 0.0;
  ConstantsLedger constants;
  UniformBounds bounds;
  double delta = 0.0;
  LatticeRule rule = LatticeRule::safe;
  std::int64_t safe_N = 0, paper_N = 0;
  int safe_M = 0, paper_M = 0;
  LatticeSpec lattice;
  std::uint64_t count = 0;
  std::int64_t n_modes = 0;
  int resolution = 0;
  double dt = 0.0;
  std::int64_t store_every = 1;
  TimeScheme scheme = TimeScheme::integrating_factor_rk4;
  std::vector<PointResult> points;
  bool interrupted = false;

  bool ball_certified() const {
    if (interrupted || points.size() != count) return false;
    for (const auto& p : points)
      if (p.status != PointStatus::certified) return false;
    return !points.empty();
  }

  std::uint64_t status_count(PointStatus s) const {
    std::uint64_t n = 0;
    for (const auto& p : points)
      if (p.status == s) ++n;
    return n;
  }
};

// --- JSON pieces -------------------------------------------------------------

inline Json to_json(const UniformBounds& b) {
  return Json{{"d_s", b.D_S}, {"e_s", b.E_S},
              {"provenance", to_string(b.provenance)},
              {"safety_factor", b.safety_factor}};
}
inline UniformBounds bounds_from_json(const Json& j) {
  return UniformBounds{j.at("d_s").get<double>(), j.at("e_s").get<double>(),
                       provenance_from_string(j.at("provenance").get<std::string>()),
                       j.at("safety_factor").get<double>()};
}

inline Json to_json(const PointResult& p) {
  Json j{{"point", p.index}, {"status", to_string(p.status)}, {"reason", p.reason}};
  if (p.lhs) j["lhs"] = *p.lhs;
  if (p.rhs) j["rhs"] = *p.rhs;
  if (p.integral_I) j["integral_I"] = *p.integral_I;
  return j;
}
inline PointResult point_from_json(const Json& j) {
  PointResult p;
  p.index = j.at("point").get<std::uint64_t>();
  p.status = point_status_from_string(j.at("status").get<std::string>());
  p.reason = j.at("reason").get<std::string>();
  if (j.contains("lhs")) p.lhs = j.at("lhs").get<double>();
  if (j.contains("rhs")) p.rhs = j.at("rhs").get<double>();
  if (j.contains("integral_I")) p.integral_I = j.at("integral_I").get<double>();
  return p;
}

namespace detail {

inline Json campaign_header_json(const CampaignState& st) {
  Json j{{"schema", "enscert-checkpoint/1"},
         {"space", st.space},
         {"radius", st.radius},
         {"t_star", st.t_star},
         {"constants", to_json(st.constants)},
         {"bounds", to_json(st.bounds)},
         {"delta", st.delta},
         {"rule", to_string(st.rule)},
         {"safe_N", st.safe_N},
         {"safe_M", st.safe_M},
         {"paper_N", st.paper_N},
         {"paper_M", st.paper_M},
         {"lattice", Json{{"N", st.lattice.N}, {"M", st.lattice.M},
                          {"S", st.lattice.S}, {"delta", st.lattice.delta}}},
         {"count", st.count},
         {"config", Json{{"resolution", st.resolution},
                         {"n_modes", st.n_modes},
                         {"dt", st.dt},
                         {"store_every", st.store_every},
                         {"scheme", to_string(st.scheme)}}}};
  if (st.gevrey) {
    j["gevrey"] = Json{{"tau", st.gevrey->tau}, {"S", st.gevrey->S},
                       {"assumes_regularity", true}};
  }
  return j;
}

// Existing checkpoint: header line must match the freshly derived campaign
// byte for byte; completed points are loaded, a torn trailing line is
// dropped.
inline std::map<std::uint64_t, PointResult> load_checkpoint(const std::string& path,
                                                            const std::string& expected_header) {
  std::map<std::uint64_t, PointResult> done;
  std::ifstream in(path);
  if (!in.good()) return done;
  std::string line;
  if (!std::getline(in, line)) return done;  // empty file: treat as fresh
  if (line != expected_header)
    throw checkpoint_error("checkpoint header does not match this campaign");
  std::vector<std::string> rest;
  while (std::getline(in, line)) rest.push_back(line);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    Json j = Json::parse(rest[i], nullptr, false);
    if (j.is_discarded()) {
      if (i + 1 == rest.size()) break;  // torn final write
      throw checkpoint_error("checkpoint has a corrupt interior record");
    }
    PointResult p = point_from_json(j);
    done.emplace(p.index, p);  // first record wins; replays are idempotent
  }
  return done;
}

}  // namespace detail

// One-shot certification of a single initial condition with this config.
// The horizon is the override if given, else T* = c^{1/2}||u0||^2, floored
// at one time step so the degenerate zero field still produces a report.
inline CertificateReport certify_one(const SpectralField& u0, const RunConfig& config) {
  config.validate();
  double Tstar = config.t_star_override ? *config.t_star_override
                                        : t_star(u0, config.constants);
  if (Tstar < config.dt) Tstar = config.dt;
  const Trajectory traj = integrate(u0, Tstar, config.integrator_config());
  return evaluate_certificate(u0, traj, Tstar, config.constants);
}

namespace detail {

inline CampaignState run_campaign(const std::string& space, double radius,
                                  double S, std::optional<GevreyReduction> gevrey,
                                  const RunConfig& config) {
  config.validate();
  if (!(S > 0)) throw config_error("ball radius must be positive");

  CampaignState st;
  st.space = space;
  st.radius = radius;
  st.gevrey = gevrey;
  st.constants = config.constants;
  st.n_modes = config.effective_n_modes();
  st.resolution = config.resolution;
  st.dt = config.dt;
  st.store_every = config.store_every;
  st.scheme = config.scheme;

  // (1) Verification horizon from the worst case over the ball:
  // ||u0|| <= ||Du0|| <= ||Au0|| <= S along the Poincare chain.
  st.t_star = config.t_star_override ? *config.t_star_override
                                     : std::sqrt(config.constants.c_const) * S * S;

  // (2) Uniform bounds: user-supplied or from pilot integrations.
  if (config.bounds_override) {
    st.bounds = *config.bounds_override;
    st.bounds.provenance = BoundsProvenance::user_supplied;
  } else {
    FieldSampler sampler(config.pilot_seed);
    std::vector<Trajectory> pilots;
    pilots.reserve(std::size_t(config.pilot_samples));
    const IntegratorConfig ic = config.integrator_config();
    GalerkinSolver solver(ic);
    for (int i = 0; i < config.pilot_samples; ++i) {
      // Ladder of radii up to the ball surface ||Au0|| = S.
      const double radius = S * double(i + 1) / double(config.pilot_samples);
      pilots.push_back(solver.integrate(
          sampler.random_field_with_h2(config.resolution, radius * radius), st.t_star));
    }
    st.bounds = empirical_bounds(pilots, config.safety_factor);
  }

  // (3) Uniform robustness radius.
  st.delta = delta_of_S(st.bounds, st.t_star, config.constants);

  // (4) Lattice parameters under both rules; the active rule drives the run.
  st.safe_N = choose_N(S, st.delta);
  st.safe_M = choose_M(st.safe_N, st.delta);
  st.paper_N = choose_N_paper_rule(S, st.delta);
  st.paper_M = choose_M_paper_rule(st.delta);
  st.rule = config.lattice_rule;
  if (st.rule == LatticeRule::safe)
    st.lattice = LatticeSpec{st.safe_N, st.safe_M, S, st.delta};
  else
    st.lattice = LatticeSpec{st.paper_N, st.paper_M, S, st.delta};

  // (5) Enumerate and certify.
  st.count = count_lattice(st.lattice, config.count_cap);

  std::vector<std::vector<double>> alphas;
  alphas.reserve(st.count);
  enumerate_lattice(
      st.lattice,
      [&](std::uint64_t, const std::vector<double>& alpha, const SpectralField&) {
        alphas.push_back(alpha);
      },
      config.count_cap);

  const std::string header = campaign_header_json(st).dump();
  std::map<std::uint64_t, PointResult> done;
  std::ofstream ckpt;
  if (!config.checkpoint_path.empty()) {
    done = load_checkpoint(config.checkpoint_path, header);
    ckpt.open(config.checkpoint_path, std::ios::app);
    if (!ckpt.good()) throw checkpoint_error("cannot open checkpoint for writing");
    std::ifstream probe(config.checkpoint_path);
    std::string first;
    if (!std::getline(probe, first) || first.empty()) {
      ckpt << header << "\n";
      ckpt.flush();
    }
  }

  std::vector<std::uint64_t> todo;
  for (std::uint64_t i = 0; i < st.count; ++i)
    if (!done.count(i)) todo.push_back(i);

  const double small_data_threshold = config.constants.small_data_enstrophy_threshold();
  StokesBasis synth_basis;
  const int lattice_radius = synth_basis.radius_for_count(st.lattice.N);

  std::mutex sink_mutex;
  std::atomic<bool> stop{false};
  std::uint64_t newly_done = 0;

  const auto certify_point = [&](std::uint64_t index, GalerkinSolver& solver,
                                 StokesBasis& basis) -> PointResult {
    PointResult res;
    res.index = index;
    SpectralField u0(lattice_radius);
    const std::vector<double>& alpha = alphas[index];
    for (std::size_t j = 0; j < alpha.size(); ++j)
      if (alpha[j] != 0.0) basis.add_scaled(u0, std::int64_t(j + 1), alpha[j]);

    if (u0.enstrophy() <= small_data_threshold) {
      res.status = PointStatus::certified;
      res.reason = "small-data";
      return res;
    }
    try {
      const Trajectory traj = solver.integrate(u0, st.t_star);
      const CertificateReport rep =
          evaluate_certificate(u0, traj, st.t_star, config.constants);
      res.status = (rep.verdict == Verdict::certified) ? PointStatus::certified
                                                       : PointStatus::inconclusive;
      res.reason = "certificate";
      res.lhs = rep.lhs;
      res.rhs = rep.rhs;
      res.integral_I = rep.integral_I;
    } catch (const divergence_error&) {
      res.status = PointStatus::diverged;
      res.reason = "blow-up-guard";
    } catch (const resolution_error&) {
      res.status = PointStatus::diverged;
      res.reason = "resolution-failure";
    }
    return res;
  };

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr worker_error;
  const auto worker = [&]() {
    try {
      GalerkinSolver solver(config.integrator_config());
      StokesBasis basis;
      basis.extend_to_count(std::max<std::int64_t>(st.lattice.N, 1));
      while (true) {
        if (stop.load()) return;
        const std::size_t slot = cursor.fetch_add(1);
        if (slot >= todo.size()) return;
        const std::uint64_t index = todo[slot];
        PointResult res = certify_point(index, solver, basis);
        std::lock_guard<std::mutex> lock(sink_mutex);
        done.emplace(res.index, res);
        if (ckpt.is_open()) {
          ckpt << to_json(res).dump() << "\n";
          ckpt.flush();
        }
        ++newly_done;
        if (config.stop_after_points && newly_done >= *config.stop_after_points)
          stop.store(true);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      if (!worker_error) worker_error = std::current_exception();
      stop.store(true);
    }
  };

  if (config.stop_after_points && *config.stop_after_points == 0) {
    stop.store(true);
  } else {
    const unsigned nw =
        unsigned(std::min<std::size_t>(config.effective_workers(), std::max<std::size_t>(todo.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  st.interrupted = done.size() < st.count;
  st.points.reserve(done.size());
  for (std::uint64_t i = 0; i < st.count; ++i) {
    auto it = done.find(i);
    if (it != done.end()) st.points.push_back(it->second);
  }
  return st;
}

}  // namespace detail

inline CampaignState verify_ball_h2(double S, const RunConfig& config) {
  return detail::run_campaign("h2", S, S, std::nullopt, config);
}

// The V-ball statement is conditional: it assumes every solution from the
// ball is regular, and the report carries that flag.
inline CampaignState verify_ball_v(double R, const RunConfig& config) {
  if (!(R > 0)) throw config_error("ball radius must be positive");
  const GevreyReduction red = gevrey_reduction(R, config.constants);
  return detail::run_campaign("v", R, red.S, red, config);
}

inline Json campaign_report_json(const CampaignState& st) {
  Json j{{"schema", "enscert-campaign-report/1"},
         {"space", st.space},
         {"radius", st.radius}};
  if (st.gevrey) {
    j["gevrey"] = Json{{"tau", st.gevrey->tau}, {"S", st.gevrey->S},
                       {"assumes_regularity", true}};
  }
  j["t_star"] = st.t_star;
  j["constants"] = to_json(st.constants);
  j["bounds"] = to_json(st.bounds);
  j["delta"] = st.delta;
  j["rules"] = Json{{"active", to_string(st.rule)},
                    {"safe", Json{{"N", st.safe_N}, {"M", st.safe_M}}},
                    {"paper", Json{{"N", st.paper_N}, {"M", st.paper_M}}}};
  j["lattice"] = Json{{"N", st.lattice.N}, {"M", st.lattice.M},
                      {"S", st.lattice.S}, {"delta", st.lattice.delta},
                      {"count", st.count}};
  j["config"] = Json{{"resolution", st.resolution}, {"n_modes", st.n_modes},
                     {"dt", st.dt}, {"store_every", st.store_every},
                     {"scheme", to_string(st.scheme)}};
  Json pts = Json::array();
  for (const auto& p : st.points) pts.push_back(to_json(p));
  j["points"] = pts;
  j["summary"] = Json{{"total", st.count},
                      {"completed", st.points.size()},
                      {"certified", st.status_count(PointStatus::certified)},
                      {"inconclusive", st.status_count(PointStatus::inconclusive)},
                      {"diverged", st.status_count(PointStatus::diverged)},
                      {"interrupted", st.interrupted},
                      {"ball_certified", st.ball_certified()}};
  return j;
}

}  // namespace enscert
