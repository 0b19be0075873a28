#ifndef NODAL_IVP_HPP
#define NODAL_IVP_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "nodal/nonlinearity.hpp"
#include "nodal/phi_model.hpp"

namespace nodal {

struct ProblemParams {
  double alpha = 0.0;
  double gamma = 0.0;
  double lambda = 1.0;
  double R = 1.0;
  double d = 1.0;  // initial height u(0)
};

// Throws std::domain_error on violated invariants, in particular the
// condition gamma >= max{alpha, -alpha/(gamma1 - 1)}.
void validate_params(const ProblemParams& params, const PhiSpec& phi, const FSpec& f);

enum class TrajStatus { reached_rmax, dead_core, step_failure, zero_budget };

// Interpolation coefficients of one accepted integrator step, for the
// state (u, v) on [r0, r0 + h].
struct DenseStep {
  double r0 = 0.0;
  double h = 0.0;
  std::array<double, 5> cu{};
  std::array<double, 5> cv{};
};

// Dense numerical solution of the IVP in conserved-flux variables
//   v(r) = r^alpha phi(|u'|) u',   v' = -lambda r^gamma f(u).
struct Trajectory {
  std::vector<double> r, u, du, v, dv;
  std::vector<DenseStep> dense;  // covers the continuation part; may be empty
  TrajStatus status = TrajStatus::reached_rmax;
  double d = 0.0;
  double err_scale = 1e-10;  // integrator tolerance the run was made with

  std::size_t size() const { return r.size(); }
  double r_back() const { return r.back(); }

  // Dense-output evaluation where available, cubic Hermite between nodes
  // otherwise.
  double eval_u(double rq) const;
  double eval_du(double rq) const;
  double eval_v(double rq) const;
};

struct SolverOptions {
  double eps0 = -1.0;  // < 0: auto, 1e-3 * min(1, r_max)
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double dead_core_tol = 1e-13;
  double max_step_frac = 0.02;  // cap on step / r_max, keeps nodes dense enough
                                // for bracketed zero extraction
};

// Fixed point of the integral operator
//   T(u)(r) = d - integral_0^r h^{-1}( t^{-alpha} integral_0^t lambda s^gamma f(u) ds ) dt
// on [0, eps].  eps is halved until the measured contraction factor is <= 1/2.
// On return *contraction_out (if given) holds the measured factor.
Trajectory picard_start(const ProblemParams& params, const PhiSpec& phi, const FSpec& f,
                        double eps, double* contraction_out = nullptr);

// Continues an explicit state (r_start, u_start, v_start) by adaptive
// error-controlled stepping of the regular first-order system.
Trajectory continue_trajectory(const ProblemParams& params, const PhiSpec& phi,
                               const FSpec& f, double r_start, double u_start,
                               double v_start, double r_max, int max_zero_count,
                               const SolverOptions& opts = {});

// Picard start at the origin, then continuation; stops at r_max, at the
// requested number of sign changes of u, or at a dead core.
Trajectory integrate_trajectory(const ProblemParams& params, const PhiSpec& phi,
                                const FSpec& f, double r_max, int max_zero_count,
                                const SolverOptions& opts = {});

// max over nodes of |v[i] + lambda Q(r[i])| / (1 + |v[i]|) where Q is an
// independent Gauss-Legendre quadrature of t^gamma f(u(t)) on the stored
// dense output.
double integral_residual(const Trajectory& traj, const ProblemParams& params,
                         const PhiSpec& phi, const FSpec& f);

}  // namespace nodal

#endif
