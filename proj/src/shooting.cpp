#include "nodal/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nodal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisect f on [a, b] with f(a) f(b) <= 0 down to machine-level width.
template <class Fn>
double bisect(Fn&& fn, double a, double b, double fa, double abs_stop) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (b - a <= std::max(abs_stop, 4.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(std::abs(a), std::abs(b))))
      return m;
    const double fm = fn(m);
    if (std::abs(fm) <= 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ZeroSequence zeros_of(const Trajectory& traj, int count) {
  ZeroSequence seq;
  if (traj.size() < 2 || count <= 0) {
    seq.truncated = count > 0;
    return seq;
  }
  const double u_tol = 1e-12 * (1.0 + std::abs(traj.d));

  for (std::size_t i = 0; i + 1 < traj.size() && int(seq.zeros.size()) < count; ++i) {
    const double u0 = traj.u[i], u1 = traj.u[i + 1];
    if (u0 == 0.0 && i == 0) continue;
    if (!(u0 * u1 < 0.0) && u1 != 0.0) continue;
    double z;
    if (u1 == 0.0) {
      z = traj.r[i + 1];
    } else {
      z = bisect([&traj](double x) { return traj.eval_u(x); }, traj.r[i],
                 traj.r[i + 1], u0, 0.0);
    }
    const double slope = traj.eval_du(z);
    // flag in case the refined value drifted (interpolant vs node signs)
    if (std::abs(traj.eval_u(z)) > std::max(u_tol, 1e-9 * (1.0 + std::abs(traj.d))))
      continue;
    seq.zeros.push_back(z);
    seq.slopes.push_back(slope);
    seq.err.push_back(10.0 * traj.err_scale * std::max(1.0, z) +
                      u_tol / std::max(std::abs(slope), 1e-8));
  }
  seq.truncated = int(seq.zeros.size()) < count;

  // interleaved extrema: sign changes of the flux v
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double v0 = traj.v[i], v1 = traj.v[i + 1];
    if (!(v0 * v1 < 0.0)) continue;
    const double m = bisect([&traj](double x) { return traj.eval_v(x); }, traj.r[i],
                            traj.r[i + 1], v0, 0.0);
    seq.extrema_positions.push_back(m);
  }
  return seq;
}

double lambda_threshold(const PhiSpec& phi, const FSpec& f, double alpha,
                        double gamma, double R, double d_infinity) {
  const double fd = f_eval(f, d_infinity);
  if (fd <= 0.0) throw std::domain_error("lambda_threshold: f(d_infinity) <= 0");
  if (gamma < std::max(alpha, -alpha / (phi.gamma1 - 1.0)) - 1e-12)
    throw std::domain_error("lambda_threshold: condition (gamma, alpha) violated");
  double best = kInf;
  for (double eta : {phi.gamma1, phi.gamma2}) {
    const double lam = (gamma + 1.0) * phi.h_at_1 / fd *
                       std::pow(d_infinity * (gamma - alpha + eta) / (eta - 1.0),
                                eta - 1.0) *
                       std::pow(R, -(gamma - alpha + eta));
    best = std::min(best, lam);
    if (phi.gamma1 == phi.gamma2) break;
  }
  return best;
}

namespace {

struct ZeroProbe {
  const ProblemParams& base;
  const PhiSpec& phi;
  const FSpec& f;
  const ShootOptions& opts;

  // k-th zero of u(., d), or +inf when fewer than k zeros occur before the
  // probe horizon just past R
  double kth_zero(double d, int k, double* slope_out = nullptr) const {
    ProblemParams p = base;
    p.d = d;
    const double horizon = base.R * 1.02;
    Trajectory traj =
        integrate_trajectory(p, phi, f, horizon, k + 1, opts.solver);
    ZeroSequence zs = zeros_of(traj, k);
    if (int(zs.zeros.size()) < k) return kInf;
    if (slope_out) *slope_out = zs.slopes[k - 1];
    return zs.zeros[k - 1];
  }
};

// Locate the boundary point of the predicate z_k(d) >= R inside (lo, hi],
// where the predicate holds at hi and fails at lo.
double refine_level(const ZeroProbe& probe, int k, double lo, double hi,
                    const ShootOptions& opts, double d_inf) {
  const double R = probe.base.R;
  double best_d = hi, best_gap = kInf;
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double slope = 1.0;
    const double z = probe.kth_zero(mid, k, &slope);
    if (std::isfinite(z)) {
      const double gap = std::abs(z - R);
      if (gap < best_gap) {
        best_gap = gap;
        best_d = mid;
      }
      const double tol_z =
          std::min(opts.z_rtol * R,
                   opts.boundary_tol * d_inf / std::max(std::abs(slope), 1e-12));
      if (gap <= tol_z) return mid;
    }
    if (z >= R) hi = mid; else lo = mid;
    if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  if (best_gap <= 10.0 * opts.z_rtol * R) return best_d;
  throw NumericError("level bisection stalled: |z_k - R| stuck at " +
                         std::to_string(best_gap),
                     lo, hi);
}

Trajectory level_profile(const ZeroProbe& probe, double d, int ell) {
  ProblemParams p = probe.base;
  p.d = d;
  return integrate_trajectory(p, probe.phi, probe.f, probe.base.R, ell + 2,
                              probe.opts.solver);
}

}  // namespace

LevelResult find_d0(const ProblemParams& base, const PhiSpec& phi, const FSpec& f,
                    const ShootOptions& opts) {
  const double d_inf = f.d_infinity;
  ZeroProbe probe{base, phi, f, opts};

  // geometric scan for the largest bracket where z_1(d) >= R flips
  double hi = -1.0, lo = -1.0;
  double d = d_inf;
  bool prev_ge = false, have_prev = false;
  for (int k = 0; k <= opts.max_halvings; ++k, d *= 0.5) {
    const bool ge = probe.kth_zero(d, 1) >= base.R;
    if (have_prev && prev_ge && !ge) {
      hi = d * 2.0;
      lo = d;
      break;
    }
    prev_ge = ge;
    have_prev = true;
  }
  if (hi < 0.0)
    throw NotBracketedError(
        prev_ge ? "find_d0: z_1(d) >= R for the whole scanned range; since "
                  "z_1(d) -> 0 as d -> 0 this indicates tolerance misconfiguration"
                : "find_d0: no d in (0, d_infinity] with z_1(d) >= R");

  const double d0 = refine_level(probe, 1, lo, hi, opts, d_inf);
  LevelResult res;
  res.d = d0;
  res.profile = level_profile(probe, d0, 0);
  return res;
}

LevelResult find_d_ell(int ell, double d_prev, const ProblemParams& base,
                       const PhiSpec& phi, const FSpec& f,
                       const ShootOptions& opts) {
  if (ell < 1) throw std::domain_error("find_d_ell: ell must be >= 1");
  const double d_inf = f.d_infinity;
  ZeroProbe probe{base, phi, f, opts};

  // descend from the previous level; the predicate z_{ell+1}(d) >= R holds
  // at d_prev and fails once the profile shrinks enough
  double hi = d_prev, lo = -1.0;
  double d = 0.5 * d_prev;
  for (int k = 1; k <= opts.max_halvings; ++k, d *= 0.5) {
    if (probe.kth_zero(d, ell + 1) >= base.R) {
      hi = d;
    } else {
      lo = d;
      break;
    }
  }
  if (lo < 0.0)
    throw NotBracketedError("find_d_ell: z_{ell+1}(d) >= R persisted for the "
                            "whole geometric descent; since z(d) -> 0 as d -> 0 "
                            "this indicates tolerance misconfiguration");

  const double d_ell = refine_level(probe, ell + 1, lo, hi, opts, d_inf);
  const double z_ell = probe.kth_zero(d_ell, ell);
  if (!(z_ell < base.R))
    throw NumericError("find_d_ell: z_ell(d_ell) >= R at the located level",
                       lo, hi);
  LevelResult res;
  res.d = d_ell;
  res.profile = level_profile(probe, d_ell, ell);
  return res;
}

ShootingResult solve_problem(const ProblemParams& base, const PhiSpec& phi,
                             const FSpec& f, int levels, const ShootOptions& opts) {
  ShootingResult out;
  out.lambda_used = base.lambda;
  out.z_rtol_achieved = opts.z_rtol;

  auto push_level = [&](const LevelResult& lev, int ell) {
    out.d_levels.push_back(lev.d);
    out.profiles.push_back(lev.profile);
    ZeroSequence zs = zeros_of(lev.profile, ell + 1);
    int interior = 0;
    for (double z : zs.zeros)
      if (z < base.R * (1.0 - 10.0 * opts.z_rtol)) ++interior;
    out.zero_counts.push_back(interior);
    out.boundary_values.push_back(lev.profile.eval_u(base.R));
  };

  try {
    LevelResult l0 = find_d0(base, phi, f, opts);
    push_level(l0, 0);
    double d_prev = l0.d;
    for (int ell = 1; ell <= levels; ++ell) {
      LevelResult lev = find_d_ell(ell, d_prev, base, phi, f, opts);
      push_level(lev, ell);
      d_prev = lev.d;
    }
  } catch (const ShootError&) {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "level " << out.d_levels.size() << " failed: " << e.what();
    throw ShootError(os.str(), std::move(out));
  }
  return out;
}

}  // namespace nodal
