#ifndef NODAL_DIAGNOSTICS_HPP
#define NODAL_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "nodal/ivp.hpp"
#include "nodal/report.hpp"

namespace nodal {

// E(r) = r^{alpha-gamma} H(|u'(r)|) + lambda F(u(r)), E(0) = lambda F(d).
struct EnergyProfile {
  std::vector<double> r;
  std::vector<double> E;
  double E0 = 0.0;                  // lambda F(d)
  double monotone_violation = 0.0;  // max positive node-to-node jump
};

EnergyProfile energy_profile(const Trajectory& traj, const ProblemParams& params,
                             const PhiSpec& phi, const FSpec& f);

// H(|u'|) <= lambda r^{gamma-alpha} (F(d) - F(u)) and F(u) <= F(d) at every
// node, with solver-tolerance slack.
ValidationReport check_prop1(const Trajectory& traj, const ProblemParams& params,
                             const PhiSpec& phi, const FSpec& f);

// Growth sandwiches: h against h(1) t^{gamma-1}, Phi against
// Phi(1) t^{gamma}, the Delta_2 ratio, the [h^{-1}]' bound and the H bounds.
ValidationReport check_bounds_suite(const PhiSpec& phi, int samples = 10000);

// Randomized verification of the Simon-type monotonicity inequality for
// eta -> phi(|eta|) eta, plus spot checks of the ellipticity quadratic form.
ValidationReport check_simon(const PhiSpec& phi, int dim, int trials,
                             std::uint64_t seed = 20240901ull);

}  // namespace nodal

#endif
