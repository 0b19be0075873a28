// Acceptance gate: runs every top-level criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  Exit status is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nodal/diagnostics.hpp"
#include "nodal/shooting.hpp"

using namespace nodal;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool ok, const std::string& detail) {
  std::printf("criterion %2d  %-28s %s  %s\n", idx, title,
              ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

const PhiSpec kPhi2 = PhiSpec::power_law(2.0);
const FSpec kF = FSpec::power_law(1.0 / 3.0, 1.0);
const double kZ1 = std::sqrt(2.0 / 3.0) * 0.75 * std::beta(0.75, 0.5);

ProblemParams benchmark(double R, double d = 1.0, double lambda = 1.0) {
  ProblemParams p;
  p.alpha = p.gamma = 0.0;
  p.lambda = lambda;
  p.R = R;
  p.d = d;
  return p;
}

// every trajectory the gate produces, rechecked by criteria 7 and 9
struct Collected {
  ProblemParams params;
  const PhiSpec* phi;
  const FSpec* f;
  Trajectory traj;
};
std::vector<Collected> g_trajs;

double first_zero(const ProblemParams& p, const PhiSpec& phi, const FSpec& f,
                  double horizon) {
  Trajectory traj = integrate_trajectory(p, phi, f, horizon, 2);
  ZeroSequence zs = zeros_of(traj, 1);
  return zs.zeros.empty() ? std::numeric_limits<double>::infinity()
                          : zs.zeros[0];
}

void criterion_1_2() {
  const auto t0 = std::chrono::steady_clock::now();
  ProblemParams p = benchmark(10.0 * kZ1);
  Trajectory traj = integrate_trajectory(p, kPhi2, kF, p.R, 6);
  ZeroSequence zs = zeros_of(traj, 5);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  g_trajs.push_back({p, &kPhi2, &kF, traj});

  const double rel1 =
      zs.zeros.empty() ? 1.0 : std::abs(zs.zeros[0] / kZ1 - 1.0);
  report(1, "first-zero quadrature oracle", rel1 <= 1e-6 && secs < 1.0,
         "rel err " + fmt(rel1) + ", " + fmt(secs) + " s");

  double worst = zs.zeros.size() < 5 ? 1.0 : 0.0;
  for (std::size_t l = 0; l < zs.zeros.size() && l < 5; ++l)
    worst = std::max(worst,
                     std::abs(zs.zeros[l] / ((2.0 * l + 1.0) * kZ1) - 1.0));
  report(2, "zero spacing (2l-1) z1", worst <= 1e-6, "worst rel " + fmt(worst));
}

void criterion_3() {
  ProblemParams p = benchmark(kZ1);
  bool ok = true;
  std::string detail;
  try {
    ShootOptions opts;
    opts.z_rtol = 1e-9;
    opts.boundary_tol = 1e-9;
    ShootingResult res = solve_problem(p, kPhi2, kF, 4, opts);
    double worst_d = 0.0, worst_b = 0.0;
    for (std::size_t l = 0; l < res.d_levels.size(); ++l) {
      const double oracle = std::pow(2.0 * l + 1.0, -3.0);
      if (l >= 1)
        worst_d = std::max(worst_d, std::abs(res.d_levels[l] / oracle - 1.0));
      worst_b = std::max(worst_b, std::abs(res.boundary_values[l]));
      if (res.zero_counts[l] != int(l)) ok = false;
      g_trajs.push_back({p, &kPhi2, &kF, res.profiles[l]});
    }
    ok = ok && res.d_levels.size() == 5 && worst_d <= 1e-4 && worst_b <= 1e-8;
    detail = "worst rel " + fmt(worst_d) + ", worst |u(R)| " + fmt(worst_b);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, "nodal spectrum d_l", ok, detail);
}

void criterion_4() {
  struct Cfg { double p, delta, alpha, gamma; };
  double worst = 0.0;
  for (const Cfg& cfg : {Cfg{2.0, 1.0 / 3.0, 0.0, 0.0}, Cfg{3.0, 1.0, 2.0, 2.0}}) {
    PhiSpec phi = PhiSpec::power_law(cfg.p);
    FSpec f = FSpec::power_law(cfg.delta, 2.0);
    ProblemParams p;
    p.alpha = cfg.alpha;
    p.gamma = cfg.gamma;
    p.lambda = 1.0;
    p.d = 0.25;
    p.R = 1000.0;
    const double ex = (cfg.p - 1.0 - cfg.delta) / (cfg.gamma - cfg.alpha + cfg.p);
    const double base = first_zero(p, phi, f, p.R);
    for (double c : {0.125, 8.0}) {
      ProblemParams ps = p;
      ps.d = c * p.d;
      const double z = first_zero(ps, phi, f, p.R);
      worst = std::max(worst, std::abs(z / (std::pow(c, ex) * base) - 1.0));
    }
  }
  report(4, "height scaling law", worst <= 1e-6, "worst rel " + fmt(worst));
}

void criterion_5() {
  const double lam = lambda_threshold(kPhi2, kF, 0.0, 0.0, 1.0, 1.0);
  ProblemParams p = benchmark(1.0, 1.0, 2.0);
  const double z = first_zero(p, kPhi2, kF, 1.5);
  const bool ok = std::abs(lam - 2.0) <= 1e-12 && z >= 1.0;
  report(5, "lambda threshold", ok,
         "Lambda = " + fmt(lam) + ", z1 at lambda=2: " + fmt(z));
}

void criterion_6() {
  std::mt19937_64 rng(987654321ull);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    ProblemParams p;
    p.alpha = 3.0 * uni(rng);
    p.gamma = p.alpha + 0.1 + 1.5 * uni(rng);
    p.lambda = 0.3 + 2.0 * uni(rng);
    p.R = 4.0;
    p.d = 0.2 + 0.8 * uni(rng);
    const int which = int(3.0 * uni(rng));
    PhiSpec phi = which == 0   ? PhiSpec::power_law(2.0)
                  : which == 1 ? PhiSpec::power_law(3.0)
                               : PhiSpec::sum_of_powers_law(2.0, 3.0);
    FSpec f = FSpec::power_law(0.4 + 1.2 * uni(rng), 1.0);
    Trajectory traj = integrate_trajectory(p, phi, f, p.R, 4);
    EnergyProfile ep = energy_profile(traj, p, phi, f);
    worst = std::max(worst,
                     ep.monotone_violation / (1.0 + std::abs(ep.E0)));
  }
  // conservative case: energy must stay pinned at its initial value
  ProblemParams p = benchmark(8.0);
  SolverOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-13;
  Trajectory traj = integrate_trajectory(p, kPhi2, kF, 8.0, 5, tight);
  EnergyProfile ep = energy_profile(traj, p, kPhi2, kF);
  double drift = 0.0;
  for (double e : ep.E) drift = std::max(drift, std::abs(e - ep.E0));
  const bool ok = worst <= 1e-8 && drift <= 1e-9;
  report(6, "energy dissipation", ok,
         "worst rel increase " + fmt(worst) + ", autonomous drift " + fmt(drift));
}

void criterion_7() {
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const Collected& c : g_trajs) {
    ValidationReport rep = check_prop1(c.traj, c.params, *c.phi, *c.f);
    ok = ok && rep.passed();
    worst = std::min(worst, rep.find("gradient_bound")->margin);
  }
  report(7, "pointwise bound suite", ok,
         std::to_string(g_trajs.size()) + " trajectories, min margin " +
             fmt(worst));
}

void criterion_8() {
  bool ok = true;
  std::string bad;
  for (const PhiSpec& s : {PhiSpec::power_law(2.0), PhiSpec::power_law(3.0),
                           PhiSpec::sum_of_powers_law(2.0, 3.0)}) {
    ValidationReport bounds = check_bounds_suite(s, 10000);
    if (!bounds.passed()) { ok = false; bad += " bounds"; }
    for (int dim = 1; dim <= 3; ++dim) {
      ValidationReport simon = check_simon(s, dim, 100000);
      if (!simon.passed()) { ok = false; bad += " simon"; }
    }
  }
  report(8, "growth inequality suite", ok,
         ok ? "3 families x (bounds + 3-dim Simon)" : bad);
}

void criterion_9() {
  double worst = 0.0;
  for (const Collected& c : g_trajs)
    worst = std::max(worst, integral_residual(c.traj, c.params, *c.phi, *c.f));
  report(9, "independent quadrature residual", worst <= 1e-8,
         "worst " + fmt(worst));
}

void criterion_10() {
  bool ok = true;
  struct Pair { double delta, gamma1; };
  for (const Pair& g : {Pair{0.3, 2.0}, Pair{1.5, 2.0}, Pair{1.5, 3.0},
                        Pair{2.5, 3.0}, Pair{0.5, 1.3}, Pair{1.0, 2.5}}) {
    FSpec f = FSpec::power_law(g.delta, 1.0);
    ValidationReport rep = validate_f(f, g.gamma1, 1.0);
    const bool want = g.delta < g.gamma1 - 1.0;
    const Verdict got = rep.find("f3")->verdict;
    if (got != (want ? Verdict::pass : Verdict::fail)) ok = false;
  }
  PhiSpec bad = PhiSpec::custom([](double t) { return std::exp(t); },
                                [](double t) { return std::exp(t); }, 2.0, 3.0);
  if (validate_phi(bad).passed()) ok = false;
  for (const PhiSpec& s : {PhiSpec::power_law(2.0), PhiSpec::power_law(3.0),
                           PhiSpec::sum_of_powers_law(2.0, 3.0)})
    if (!validate_phi(s).passed()) ok = false;
  report(10, "validator oracles", ok, "");
}

}  // namespace

int main() {
  criterion_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s (%d/10 criteria passed)\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              10 - g_failures);
  return g_failures;
}
