// Config-driven driver: validate models, solve the radial IVP, extract zero
// sequences, compute the lambda threshold, run the full nodal shoot, and run
// the inequality diagnostics.  Exit codes: 0 success, 1 domain/validation
// failure, 2 numeric failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nodal/diagnostics.hpp"
#include "nodal/shooting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nodal;

namespace {

constexpr const char* kVersion = "1.0.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ConfigError("unknown key '" + path + "." + it.key() + "'");
  }
}

double need_num(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key))
    throw ConfigError("missing required key '" + path + "." + key + "'");
  if (!obj[key].is_number())
    throw ConfigError("'" + path + "." + key + "' must be a number");
  return obj[key].get<double>();
}

double opt_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

struct RunConfig {
  PhiSpec phi = PhiSpec::power_law(2.0);
  FSpec f = FSpec::power_law(1.0, 1.0);
  ProblemParams problem;
  ShootOptions shoot;
  int max_ell = 3;
  std::uint64_t seed = 20240901ull;
  std::string out_dir;
  bool want_csv = true;
  bool want_json = true;
  json resolved;  // round-trippable echo of the parsed config
};

PhiSpec parse_phi(const json& j) {
  if (!j.contains("family")) throw ConfigError("missing required key 'phi.family'");
  const std::string fam = j["family"].get<std::string>();
  if (fam == "power") {
    reject_unknown(j, "phi", {"family", "p"});
    return PhiSpec::power_law(need_num(j, "phi", "p"));
  }
  if (fam == "sum_of_powers") {
    reject_unknown(j, "phi", {"family", "p", "q"});
    return PhiSpec::sum_of_powers_law(need_num(j, "phi", "p"),
                                      need_num(j, "phi", "q"));
  }
  if (fam == "exp") {
    // exponential growth; declared exponent window is wrong by construction
    // and the validator is expected to reject it
    reject_unknown(j, "phi", {"family", "gamma1", "gamma2"});
    return PhiSpec::custom([](double t) { return std::exp(t); },
                           [](double t) { return std::exp(t); },
                           opt_num(j, "gamma1", 2.0), opt_num(j, "gamma2", 3.0));
  }
  throw ConfigError("'phi.family' must be power | sum_of_powers | exp");
}

FSpec parse_f(const json& j) {
  if (!j.contains("family")) throw ConfigError("missing required key 'f.family'");
  const std::string fam = j["family"].get<std::string>();
  if (fam == "power") {
    reject_unknown(j, "f", {"family", "delta", "d_infinity"});
    return FSpec::power_law(need_num(j, "f", "delta"),
                            need_num(j, "f", "d_infinity"));
  }
  if (fam == "arctan") {
    reject_unknown(j, "f", {"family", "d_infinity"});
    return FSpec::arctan(need_num(j, "f", "d_infinity"));
  }
  throw ConfigError("'f.family' must be power | arctan");
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  reject_unknown(root, "(root)",
                 {"preset", "phi", "f", "problem", "solver", "output"});

  RunConfig cfg;
  json problem = root.value("problem", json::object());
  json phi = root.value("phi", json::object());

  if (root.contains("preset")) {
    const json& pr = root["preset"];
    reject_unknown(pr, "preset", {"name", "N", "p", "k"});
    const std::string name = pr.at("name").get<std::string>();
    if (name == "p-laplacian") {
      const double N = need_num(pr, "preset", "N");
      const double p = need_num(pr, "preset", "p");
      if (!phi.contains("family")) phi = {{"family", "power"}, {"p", p}};
      if (!problem.contains("alpha")) problem["alpha"] = N - 1.0;
      if (!problem.contains("gamma")) problem["gamma"] = N - 1.0;
    } else if (name == "k-hessian") {
      const double N = need_num(pr, "preset", "N");
      const double k = need_num(pr, "preset", "k");
      if (!phi.contains("family")) phi = {{"family", "power"}, {"p", k + 1.0}};
      if (!problem.contains("alpha")) problem["alpha"] = N - k;
      if (!problem.contains("gamma")) problem["gamma"] = N - k;
    } else {
      throw ConfigError("'preset.name' must be p-laplacian | k-hessian");
    }
  }

  cfg.phi = parse_phi(phi);
  if (!root.contains("f")) throw ConfigError("missing required key 'f'");
  cfg.f = parse_f(root["f"]);

  reject_unknown(problem, "problem", {"alpha", "gamma", "lambda", "R", "d"});
  cfg.problem.alpha = opt_num(problem, "alpha", 0.0);
  cfg.problem.gamma = opt_num(problem, "gamma", cfg.problem.alpha);
  cfg.problem.lambda = opt_num(problem, "lambda", 1.0);
  cfg.problem.R = opt_num(problem, "R", 1.0);
  cfg.problem.d = opt_num(problem, "d", cfg.f.d_infinity);

  json solver = root.value("solver", json::object());
  reject_unknown(solver, "solver",
                 {"eps0", "abs_tol", "rel_tol", "boundary_tol", "z_rtol",
                  "max_ell", "dead_core_tol", "seed"});
  cfg.shoot.solver.eps0 = opt_num(solver, "eps0", -1.0);
  cfg.shoot.solver.abs_tol = opt_num(solver, "abs_tol", 1e-12);
  cfg.shoot.solver.rel_tol = opt_num(solver, "rel_tol", 1e-12);
  cfg.shoot.solver.dead_core_tol = opt_num(solver, "dead_core_tol", 1e-13);
  cfg.shoot.boundary_tol = opt_num(solver, "boundary_tol", 1e-8);
  cfg.shoot.z_rtol = opt_num(solver, "z_rtol", 1e-8);
  cfg.max_ell = int(opt_num(solver, "max_ell", 3));
  cfg.seed = std::uint64_t(opt_num(solver, "seed", 20240901.0));

  json output = root.value("output", json::object());
  reject_unknown(output, "output", {"directory", "formats"});
  if (output.contains("directory"))
    cfg.out_dir = output["directory"].get<std::string>();
  if (output.contains("formats")) {
    cfg.want_csv = cfg.want_json = false;
    for (const auto& fmt : output["formats"]) {
      const std::string s = fmt.get<std::string>();
      if (s == "csv") cfg.want_csv = true;
      else if (s == "json") cfg.want_json = true;
      else throw ConfigError("'output.formats' entries must be csv | json");
    }
  }

  // resolved echo: fully expanded, preset folded in
  cfg.resolved["phi"] = phi;
  cfg.resolved["f"] = root["f"];
  cfg.resolved["problem"] = {{"alpha", cfg.problem.alpha},
                             {"gamma", cfg.problem.gamma},
                             {"lambda", cfg.problem.lambda},
                             {"R", cfg.problem.R},
                             {"d", cfg.problem.d}};
  cfg.resolved["solver"] = {{"eps0", cfg.shoot.solver.eps0},
                            {"abs_tol", cfg.shoot.solver.abs_tol},
                            {"rel_tol", cfg.shoot.solver.rel_tol},
                            {"boundary_tol", cfg.shoot.boundary_tol},
                            {"z_rtol", cfg.shoot.z_rtol},
                            {"max_ell", cfg.max_ell},
                            {"dead_core_tol", cfg.shoot.solver.dead_core_tol},
                            {"seed", cfg.seed}};
  cfg.resolved["output"] = {{"directory", cfg.out_dir},
                            {"formats", json::array()}};
  if (cfg.want_csv) cfg.resolved["output"]["formats"].push_back("csv");
  if (cfg.want_json) cfg.resolved["output"]["formats"].push_back("json");
  return cfg;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_profile_csv(const fs::path& file, const Trajectory& traj,
                       const ProblemParams& params, const PhiSpec& phi,
                       const FSpec& f) {
  std::ofstream out(file);
  if (!out) throw NumericError("cannot write " + file.string());
  EnergyProfile ep = energy_profile(traj, params, phi, f);
  out << "r,u,du,v,E\n";
  for (std::size_t i = 0; i < traj.size(); ++i)
    out << fmt17(traj.r[i]) << ',' << fmt17(traj.u[i]) << ','
        << fmt17(traj.du[i]) << ',' << fmt17(traj.v[i]) << ','
        << fmt17(ep.E[i]) << '\n';
}

json report_json(const ValidationReport& rep) {
  json out = json::object();
  for (const auto& c : rep.checks)
    out[c.name] = {{"verdict", verdict_name(c.verdict)},
                   {"margin", c.margin},
                   {"detail", c.detail}};
  return out;
}

struct Runner {
  RunConfig cfg;
  fs::path out_dir;
  bool deterministic = false;
  json summary;

  void prepare_output() {
    out_dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    // eager writability probe: fail before any computation happens
    const fs::path probe = out_dir / ".write_probe";
    std::ofstream test(probe);
    if (!test) throw NumericError("output directory not writable: " + out_dir.string());
    test.close();
    fs::remove(probe, ec);

    summary["version"] = kVersion;
    summary["config"] = cfg.resolved;
    if (!deterministic) {
      const auto now = std::chrono::system_clock::now();
      summary["timestamp"] =
          std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
              .count();
    }
  }

  void flush_summary() {
    if (!cfg.want_json) return;
    std::ofstream out(out_dir / "summary.json");
    out << summary.dump(2) << '\n';
  }

  int run_validate() {
    ValidationReport phi_rep = validate_phi(cfg.phi);
    ValidationReport f_rep = validate_f(cfg.f, cfg.phi.gamma1, cfg.f.d_infinity);
    summary["validate"] = {{"phi", report_json(phi_rep)}, {"f", report_json(f_rep)}};
    std::cout << phi_rep.to_string() << f_rep.to_string();
    bool params_ok = true;
    try {
      validate_params(cfg.problem, cfg.phi, cfg.f);
    } catch (const std::exception& e) {
      params_ok = false;
      summary["validate"]["problem"] = e.what();
      std::cout << "problem: fail (" << e.what() << ")\n";
    }
    flush_summary();
    return (phi_rep.passed() && f_rep.passed() && params_ok) ? 0 : 1;
  }

  int run_solve_ivp() {
    validate_params(cfg.problem, cfg.phi, cfg.f);
    Trajectory traj = integrate_trajectory(cfg.problem, cfg.phi, cfg.f,
                                           cfg.problem.R, cfg.max_ell + 2,
                                           cfg.shoot.solver);
    if (cfg.want_csv)
      write_profile_csv(out_dir / "profile_ivp.csv", traj, cfg.problem, cfg.phi,
                        cfg.f);
    const double resid = integral_residual(traj, cfg.problem, cfg.phi, cfg.f);
    summary["ivp"] = {{"d", cfg.problem.d},
                      {"r_end", traj.r_back()},
                      {"u_end", traj.u.back()},
                      {"residual", resid},
                      {"nodes", traj.size()}};
    flush_summary();
    std::cout << "r_end=" << fmt17(traj.r_back())
              << " u_end=" << fmt17(traj.u.back()) << " residual=" << resid
              << "\n";
    return 0;
  }

  int run_zeros() {
    validate_params(cfg.problem, cfg.phi, cfg.f);
    Trajectory traj =
        integrate_trajectory(cfg.problem, cfg.phi, cfg.f, cfg.problem.R,
                             cfg.max_ell + 1, cfg.shoot.solver);
    ZeroSequence zs = zeros_of(traj, cfg.max_ell + 1);
    summary["zeros"] = zs.zeros;
    summary["slopes"] = zs.slopes;
    summary["extrema"] = zs.extrema_positions;
    flush_summary();
    for (double z : zs.zeros) std::cout << fmt17(z) << '\n';
    return 0;
  }

  int run_lambda_threshold() {
    const double lam =
        lambda_threshold(cfg.phi, cfg.f, cfg.problem.alpha, cfg.problem.gamma,
                         cfg.problem.R, cfg.f.d_infinity);
    summary["lambda_threshold"] = lam;
    flush_summary();
    std::cout << fmt17(lam) << '\n';
    return 0;
  }

  void write_shoot_summary(const ShootingResult& res) {
    summary["d_levels"] = res.d_levels;
    summary["zero_counts"] = res.zero_counts;
    summary["boundary_values"] = res.boundary_values;
    summary["lambda"] = res.lambda_used;
    json zeros = json::array(), residuals = json::array(),
         margins = json::array();
    for (std::size_t l = 0; l < res.profiles.size(); ++l) {
      const Trajectory& traj = res.profiles[l];
      ZeroSequence zs = zeros_of(traj, int(l) + 1);
      zeros.push_back(zs.zeros);
      residuals.push_back(integral_residual(traj, cfg.problem, cfg.phi, cfg.f));
      EnergyProfile ep = energy_profile(traj, cfg.problem, cfg.phi, cfg.f);
      margins.push_back(ep.monotone_violation);
      if (cfg.want_csv)
        write_profile_csv(out_dir / ("profile_ell" + std::to_string(l) + ".csv"),
                          traj, cfg.problem, cfg.phi, cfg.f);
    }
    summary["zeros"] = zeros;
    summary["residuals"] = residuals;
    summary["energy_margins"] = margins;
    try {
      summary["lambda_threshold"] =
          lambda_threshold(cfg.phi, cfg.f, cfg.problem.alpha, cfg.problem.gamma,
                           cfg.problem.R, cfg.f.d_infinity);
    } catch (const std::exception&) {
      summary["lambda_threshold"] = nullptr;
    }
  }

  int run_shoot() {
    ProblemParams base = cfg.problem;
    base.d = cfg.f.d_infinity;
    validate_params(base, cfg.phi, cfg.f);
    try {
      ShootingResult res =
          solve_problem(cfg.problem, cfg.phi, cfg.f, cfg.max_ell, cfg.shoot);
      write_shoot_summary(res);
      flush_summary();
      for (std::size_t l = 0; l < res.d_levels.size(); ++l)
        std::cout << "d_" << l << " = " << fmt17(res.d_levels[l]) << "  ("
                  << res.zero_counts[l] << " interior zeros)\n";
      return 0;
    } catch (const ShootError& e) {
      // keep the partial artifacts
      write_shoot_summary(e.partial);
      summary["error"] = e.what();
      flush_summary();
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  int run_diagnose() {
    ValidationReport bounds = check_bounds_suite(cfg.phi);
    summary["bounds"] = report_json(bounds);
    std::cout << bounds.to_string();
    bool ok = bounds.passed();
    for (int dim = 1; dim <= 3; ++dim) {
      ValidationReport simon = check_simon(cfg.phi, dim, 10000, cfg.seed);
      summary["simon_dim" + std::to_string(dim)] = report_json(simon);
      std::cout << simon.to_string();
      ok = ok && simon.passed();
    }
    validate_params(cfg.problem, cfg.phi, cfg.f);
    Trajectory traj =
        integrate_trajectory(cfg.problem, cfg.phi, cfg.f, cfg.problem.R,
                             cfg.max_ell + 2, cfg.shoot.solver);
    ValidationReport prop = check_prop1(traj, cfg.problem, cfg.phi, cfg.f);
    EnergyProfile ep = energy_profile(traj, cfg.problem, cfg.phi, cfg.f);
    summary["prop1"] = report_json(prop);
    summary["energy_margin"] = ep.monotone_violation;
    std::cout << prop.to_string();
    ok = ok && prop.passed();
    flush_summary();
    return ok ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial quasilinear BVP shooting solver"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "suppress the timestamp field in summaries");

  const char* names[] = {"validate",  "solve-ivp", "zeros",
                         "lambda-threshold", "shoot", "diagnose"};
  for (const char* n : names) {
    CLI::App* sub = app.add_subcommand(n);
    sub->add_option("--config", config_path, "path to the JSON run config")
        ->required();
    sub->add_option("--output-dir", out_override, "override the output directory");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  Runner runner;
  runner.deterministic = deterministic;
  try {
    runner.cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  if (!out_override.empty()) runner.cfg.out_dir = out_override;
  if (runner.cfg.out_dir.empty())
    if (const char* env = std::getenv("NODAL_OUTPUT_DIR")) runner.cfg.out_dir = env;

  try {
    runner.prepare_output();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (cmd == "validate") return runner.run_validate();
    if (cmd == "solve-ivp") return runner.run_solve_ivp();
    if (cmd == "zeros") return runner.run_zeros();
    if (cmd == "lambda-threshold") return runner.run_lambda_threshold();
    if (cmd == "shoot") return runner.run_shoot();
    if (cmd == "diagnose") return runner.run_diagnose();
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
