#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nodal/diagnostics.hpp"

using namespace nodal;

TEST_CASE("autonomous energy is conserved") {
  // alpha = gamma = 0, phi = 1: E = (u')^2/2 + lambda F(u) is a first integral
  PhiSpec phi = PhiSpec::power_law(2.0);
  FSpec f = FSpec::power_law(1.0 / 3.0, 1.0);
  ProblemParams p;
  p.alpha = p.gamma = 0.0;
  p.lambda = 1.0;
  p.R = 8.0;
  p.d = 1.0;
  SolverOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-13;
  Trajectory traj = integrate_trajectory(p, phi, f, 8.0, 5, tight);
  EnergyProfile ep = energy_profile(traj, p, phi, f);
  CHECK(ep.E0 == doctest::Approx(0.75));
  for (double e : ep.E) CHECK(std::abs(e - ep.E0) <= 1e-9);
  CHECK(ep.monotone_violation <= 1e-9);
}

TEST_CASE("energy dissipates for gamma > alpha") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int configs = 0;
  while (configs < 20) {
    const double alpha = 3.0 * uni(rng);
    const double gamma = alpha + 0.1 + 1.5 * uni(rng);
    const double lambda = 0.3 + 2.0 * uni(rng);
    const double delta = 0.4 + 1.2 * uni(rng);
    const double d = 0.2 + 0.8 * uni(rng);
    const int which = int(3.0 * uni(rng));
    PhiSpec phi = which == 0   ? PhiSpec::power_law(2.0)
                  : which == 1 ? PhiSpec::power_law(3.0)
                               : PhiSpec::sum_of_powers_law(2.0, 3.0);
    FSpec f = FSpec::power_law(delta, 1.0);
    ProblemParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.lambda = lambda;
    p.R = 4.0;
    p.d = d;
    INFO("alpha=", alpha, " gamma=", gamma, " lambda=", lambda, " delta=",
         delta, " d=", d, " phi#", which);
    Trajectory traj = integrate_trajectory(p, phi, f, 4.0, 4);
    EnergyProfile ep = energy_profile(traj, p, phi, f);
    CHECK(ep.monotone_violation <= 1e-8 * (1.0 + std::abs(ep.E0)));
    ++configs;
  }
}

TEST_CASE("pointwise gradient and potential bounds hold along trajectories") {
  PhiSpec phi = PhiSpec::sum_of_powers_law(2.0, 3.0);
  FSpec f = FSpec::power_law(1.0, 1.0);
  ProblemParams p;
  p.alpha = 1.0;
  p.gamma = 2.0;
  p.lambda = 1.5;
  p.R = 3.0;
  p.d = 0.8;
  Trajectory traj = integrate_trajectory(p, phi, f, 3.0, 4);
  ValidationReport rep = check_prop1(traj, p, phi, f);
  CHECK(rep.passed());
  CHECK(rep.find("gradient_bound")->verdict == Verdict::pass);
  CHECK(rep.find("potential_bound")->verdict == Verdict::pass);
}

TEST_CASE("growth-bound suite passes for the shipped families") {
  for (const PhiSpec& s : {PhiSpec::power_law(2.0), PhiSpec::power_law(3.0),
                           PhiSpec::sum_of_powers_law(2.0, 3.0)}) {
    ValidationReport rep = check_bounds_suite(s);
    INFO(rep.to_string());
    CHECK(rep.passed());
    CHECK(rep.find("h_sandwich")->verdict == Verdict::pass);
    CHECK(rep.find("delta2")->verdict == Verdict::pass);
    CHECK(rep.find("hinv_derivative_bound")->verdict == Verdict::pass);
    CHECK(rep.find("H_sandwich")->verdict == Verdict::pass);
  }
}

TEST_CASE("growth-bound suite flags a mis-declared window") {
  // phi = t (so the true exponent is 3) declared as [2, 2]
  PhiSpec wrong = PhiSpec::custom([](double t) { return t; },
                                  [](double) { return 1.0; }, 2.0, 2.0);
  ValidationReport rep = check_bounds_suite(wrong);
  CHECK(!rep.passed());
}

TEST_CASE("monotonicity inequality holds on random pairs") {
  for (const PhiSpec& s : {PhiSpec::power_law(2.0), PhiSpec::power_law(3.0),
                           PhiSpec::sum_of_powers_law(2.0, 3.0)}) {
    for (int dim = 1; dim <= 3; ++dim) {
      ValidationReport rep = check_simon(s, dim, 2000);
      INFO("dim=", dim, "\n", rep.to_string());
      CHECK(rep.passed());
      CHECK(rep.find("simon_monotonicity")->margin >= 0.0);
      CHECK(rep.find("ellipticity")->verdict == Verdict::pass);
    }
  }
  CHECK_THROWS_AS(check_simon(PhiSpec::power_law(2.0), 4, 10),
                  std::domain_error);
}

TEST_CASE("seeded runs are reproducible") {
  PhiSpec s = PhiSpec::sum_of_powers_law(2.0, 3.0);
  ValidationReport a = check_simon(s, 2, 500, 42);
  ValidationReport b = check_simon(s, 2, 500, 42);
  CHECK(a.find("simon_monotonicity")->margin == b.find("simon_monotonicity")->margin);
}
