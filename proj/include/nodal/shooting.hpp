#ifndef NODAL_SHOOTING_HPP
#define NODAL_SHOOTING_HPP

#include <vector>

#include "nodal/errors.hpp"
#include "nodal/ivp.hpp"

namespace nodal {

struct ZeroSequence {
  std::vector<double> zeros;              // z_1 < z_2 < ...
  std::vector<double> slopes;             // u'(z_l)
  std::vector<double> err;                // location uncertainty estimates
  std::vector<double> extrema_positions;  // m_l, where v changes sign
  bool truncated = false;                 // fewer zeros present than requested
};

// Refines up to `count` sign changes of u on the trajectory's dense output.
ZeroSequence zeros_of(const Trajectory& traj, int count);

// Largest lambda for which the first-arc envelope still keeps u(., d_infinity)
// positive up to r = R:
//   Lambda = min_{eta in {gamma1, gamma2}}
//            ((gamma+1) h(1) / f(d_inf)) [d_inf (gamma-alpha+eta)/(eta-1)]^{eta-1}
//            R^{-(gamma-alpha+eta)}.
double lambda_threshold(const PhiSpec& phi, const FSpec& f, double alpha, double gamma,
                        double R, double d_infinity);

struct ShootOptions {
  double boundary_tol = 1e-8;  // |u(R)| <= boundary_tol * d_infinity
  double z_rtol = 1e-8;        // |z - R| <= z_rtol * R
  int max_halvings = 60;
  SolverOptions solver;
};

struct LevelResult {
  double d = 0.0;
  Trajectory profile;  // on [0, R]
};

// d0 = inf{ d : z_1(d) >= R }, located by geometric scan + bisection.
// `base.d` is ignored.
LevelResult find_d0(const ProblemParams& base, const PhiSpec& phi, const FSpec& f,
                    const ShootOptions& opts = {});

// d_ell: boundary point of the predicate z_{ell+1}(d) >= R, descending from
// the previous level.
LevelResult find_d_ell(int ell, double d_prev, const ProblemParams& base,
                       const PhiSpec& phi, const FSpec& f,
                       const ShootOptions& opts = {});

struct ShootingResult {
  std::vector<double> d_levels;        // d_0 > d_1 > ... > d_L
  std::vector<Trajectory> profiles;    // truncated to [0, R]
  std::vector<int> zero_counts;        // interior zeros of each profile
  std::vector<double> boundary_values; // u_l(R)
  double lambda_used = 0.0;
  double z_rtol_achieved = 0.0;
};

// Thrown when a level fails; carries all completed levels.
struct ShootError : std::runtime_error {
  ShootingResult partial;
  ShootError(const std::string& what, ShootingResult done)
      : std::runtime_error(what), partial(std::move(done)) {}
};

ShootingResult solve_problem(const ProblemParams& base, const PhiSpec& phi,
                             const FSpec& f, int levels,
                             const ShootOptions& opts = {});

}  // namespace nodal

#endif
