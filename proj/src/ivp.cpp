#include "nodal/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// u' recovered from the flux: u' = sgn(v) h^{-1}(r^{-alpha} |v|).
double slope_from_flux(const PhiSpec& phi, double alpha, double r, double v) {
  if (v == 0.0) return 0.0;
  return sgn(v) * h_inverse(phi, std::pow(r, -alpha) * std::abs(v));
}

std::size_t locate(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  return i;
}

double hermite(double x0, double x1, double y0, double y1, double m0, double m1,
               double x) {
  const double h = x1 - x0, th = (x - x0) / h;
  const double t2 = th * th, t3 = t2 * th;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + th) * h * m0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
}

double hermite_deriv(double x0, double x1, double y0, double y1, double m0,
                     double m1, double x) {
  const double h = x1 - x0, th = (x - x0) / h;
  const double t2 = th * th;
  return ((6 * t2 - 6 * th) * y0 + (3 * t2 - 4 * th + 1) * h * m0 +
          (-6 * t2 + 6 * th) * y1 + (3 * t2 - 2 * th) * h * m1) / h;
}

double dense_eval(const std::array<double, 5>& c, double th) {
  const double s1 = 1.0 - th;
  return c[0] + th * (c[1] + s1 * (c[2] + th * (c[3] + s1 * c[4])));
}

double dense_deriv(const std::array<double, 5>& c, double th, double h) {
  const double inner = c[2] + th * (c[3] + (1.0 - th) * c[4]);
  const double dinner = c[3] + (1.0 - 2.0 * th) * c[4];
  return (c[1] + (1.0 - 2.0 * th) * inner + th * (1.0 - th) * dinner) / h;
}

}  // namespace

void validate_params(const ProblemParams& params, const PhiSpec& phi, const FSpec& f) {
  if (!(params.lambda > 0.0)) throw std::domain_error("lambda must be positive");
  if (!(params.R > 0.0)) throw std::domain_error("R must be positive");
  if (!(params.d > 0.0) || params.d > f.d_infinity)
    throw std::domain_error("d must lie in (0, d_infinity]");
  const double bound = std::max(params.alpha, -params.alpha / (phi.gamma1 - 1.0));
  if (params.gamma < bound - 1e-12)
    throw std::domain_error("condition (gamma, alpha) violated: gamma < max{alpha, -alpha/(gamma1-1)}");
}

double Trajectory::eval_u(double rq) const {
  if (!dense.empty() && rq >= dense.front().r0) {
    std::size_t lo = 0, hi = dense.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (dense[mid].r0 <= rq) lo = mid; else hi = mid - 1;
    }
    const DenseStep& s = dense[lo];
    const double th = std::clamp((rq - s.r0) / s.h, 0.0, 1.0);
    return dense_eval(s.cu, th);
  }
  const std::size_t i = locate(r, rq);
  return hermite(r[i], r[i + 1], u[i], u[i + 1], du[i], du[i + 1], rq);
}

double Trajectory::eval_du(double rq) const {
  if (!dense.empty() && rq >= dense.front().r0) {
    std::size_t lo = 0, hi = dense.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (dense[mid].r0 <= rq) lo = mid; else hi = mid - 1;
    }
    const DenseStep& s = dense[lo];
    const double th = std::clamp((rq - s.r0) / s.h, 0.0, 1.0);
    return dense_deriv(s.cu, th, s.h);
  }
  const std::size_t i = locate(r, rq);
  return hermite_deriv(r[i], r[i + 1], u[i], u[i + 1], du[i], du[i + 1], rq);
}

double Trajectory::eval_v(double rq) const {
  if (!dense.empty() && rq >= dense.front().r0) {
    std::size_t lo = 0, hi = dense.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (dense[mid].r0 <= rq) lo = mid; else hi = mid - 1;
    }
    const DenseStep& s = dense[lo];
    const double th = std::clamp((rq - s.r0) / s.h, 0.0, 1.0);
    return dense_eval(s.cv, th);
  }
  const std::size_t i = locate(r, rq);
  return hermite(r[i], r[i + 1], v[i], v[i + 1], dv[i], dv[i + 1], rq);
}

Trajectory picard_start(const ProblemParams& params, const PhiSpec& phi,
                        const FSpec& f, double eps, double* contraction_out) {
  if (!(params.d > 0.0)) throw std::domain_error("picard_start: d must be positive");
  const double fd = f_eval(f, params.d);
  if (fd <= 0.0) throw std::domain_error("picard_start: f(d) <= 0 violates (f1)");
  if (!(eps > 0.0)) throw std::domain_error("picard_start: eps must be positive");

  const double d = params.d, alpha = params.alpha, gamma = params.gamma;
  const double lambda = params.lambda;
  const int n = 256;
  const double conv_tol = 1e-12 * (1.0 + d);

  while (true) {
    std::vector<double> t(n + 1), u(n + 1, d), unew(n + 1), I(n + 1), du(n + 1),
        fu(n + 1);
    for (int j = 0; j <= n; ++j) t[j] = eps * j / n;

    double k_meas = 0.0, prev_diff = -1.0;
    bool converged = false, contracting = true;
    for (int iter = 0; iter < 200; ++iter) {
      for (int j = 0; j <= n; ++j) fu[j] = f_eval(f, u[j]);
      // I(t) = int_0^t lambda s^gamma f(u(s)) ds with the weight integrated
      // exactly against a piecewise-linear f(u)
      I[0] = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = t[j], b = t[j + 1];
        const double M0 = (std::pow(b, gamma + 1.0) - std::pow(a, gamma + 1.0)) /
                          (gamma + 1.0);
        const double M1 = (std::pow(b, gamma + 2.0) - std::pow(a, gamma + 2.0)) /
                          (gamma + 2.0);
        const double slope = (fu[j + 1] - fu[j]) / (b - a);
        I[j + 1] = I[j] + lambda * (fu[j] * M0 + slope * (M1 - a * M0));
      }
      du[0] = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double w = -std::pow(t[j], -alpha) * I[j];
        du[j] = (w == 0.0) ? 0.0 : sgn(w) * h_inverse(phi, std::abs(w));
      }
      unew[0] = d;
      for (int j = 0; j < n; ++j)
        unew[j + 1] = unew[j] + 0.5 * (du[j] + du[j + 1]) * (t[j + 1] - t[j]);

      double diff = 0.0;
      for (int j = 0; j <= n; ++j) diff = std::max(diff, std::abs(unew[j] - u[j]));
      u = unew;
      if (prev_diff > conv_tol) k_meas = diff / prev_diff;
      if (diff <= conv_tol) {
        converged = true;
        break;
      }
      if (iter >= 3 && k_meas > 0.5) {
        contracting = false;
        break;
      }
      prev_diff = diff;
    }

    if (converged && (contracting || k_meas <= 0.5)) {
      if (contraction_out) *contraction_out = k_meas;
      Trajectory traj;
      traj.d = d;
      traj.r = t;
      traj.u = u;
      traj.du = du;
      traj.v.resize(n + 1);
      traj.dv.resize(n + 1);
      for (int j = 0; j <= n; ++j) {
        traj.v[j] = -I[j];
        traj.dv[j] = (t[j] == 0.0 && gamma > 0.0)
                         ? 0.0
                         : -lambda * std::pow(t[j], gamma) * fu[j];
      }
      traj.status = TrajStatus::reached_rmax;
      return traj;
    }
    eps *= 0.5;
    if (eps < 1e-12 * std::max(1.0, params.R))
      throw NumericError("picard_start: eps underflow without contraction", 0.0, eps);
  }
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

using State = std::array<double, 2>;  // (u, v)

}  // namespace

Trajectory continue_trajectory(const ProblemParams& params, const PhiSpec& phi,
                               const FSpec& f, double r_start, double u_start,
                               double v_start, double r_max, int max_zero_count,
                               const SolverOptions& opts) {
  const double alpha = params.alpha, gamma = params.gamma, lambda = params.lambda;

  auto rhs = [&](double r, const State& y) -> State {
    return {slope_from_flux(phi, alpha, r, y[1]),
            -lambda * std::pow(r, gamma) * f_eval(f, y[0])};
  };

  Trajectory traj;
  traj.d = params.d;
  traj.err_scale = std::max(opts.abs_tol, opts.rel_tol);

  double r = r_start;
  State y{u_start, v_start};
  State k1 = rhs(r, y);
  traj.r.push_back(r);
  traj.u.push_back(y[0]);
  traj.du.push_back(k1[0]);
  traj.v.push_back(y[1]);
  traj.dv.push_back(k1[1]);

  const double h_max = opts.max_step_frac * r_max;
  double h = std::min(h_max, std::max(1e-6 * r_max, 0.1 * r_start));
  int zero_count = 0;
  traj.status = TrajStatus::reached_rmax;

  for (long step = 0; step < 400000; ++step) {
    if (r >= r_max * (1.0 - 1e-14)) {
      traj.status = TrajStatus::reached_rmax;
      break;
    }
    if (std::abs(y[0]) <= opts.dead_core_tol * (1.0 + traj.d) &&
        std::abs(y[1]) <= opts.dead_core_tol) {
      traj.status = TrajStatus::dead_core;
      break;
    }
    h = std::min(h, h_max);
    if (r + h > r_max) h = r_max - r;
    if (h < 1e-15 * std::max(1.0, r)) {
      traj.status = TrajStatus::step_failure;
      break;
    }

    const State k2 = rhs(r + C2 * h, {y[0] + h * A21 * k1[0], y[1] + h * A21 * k1[1]});
    const State k3 = rhs(r + C3 * h, {y[0] + h * (A31 * k1[0] + A32 * k2[0]),
                                      y[1] + h * (A31 * k1[1] + A32 * k2[1])});
    const State k4 = rhs(r + C4 * h,
                         {y[0] + h * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
                          y[1] + h * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1])});
    const State k5 = rhs(
        r + C5 * h,
        {y[0] + h * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
         y[1] + h * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1])});
    const State k6 =
        rhs(r + h, {y[0] + h * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] +
                                A64 * k4[0] + A65 * k5[0]),
                    y[1] + h * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] +
                                A64 * k4[1] + A65 * k5[1])});
    State ynew;
    for (int c = 0; c < 2; ++c)
      ynew[c] = y[c] + h * (B1 * k1[c] + B3 * k3[c] + B4 * k4[c] + B5 * k5[c] +
                            B6 * k6[c]);
    const State k7 = rhs(r + h, ynew);

    double err = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double e = h * (E1 * k1[c] + E3 * k3[c] + E4 * k4[c] + E5 * k5[c] +
                            E6 * k6[c] + E7 * k7[c]);
      const double sc = opts.abs_tol +
                        opts.rel_tol * std::max(std::abs(y[c]), std::abs(ynew[c]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(0.5 * err);

    // secondary guard: the slope u' must not jump across a step (h^{-1} is
    // only Hoelder near v = 0 when gamma2 > 2)
    const bool slope_jump =
        std::abs(k7[0] - k1[0]) > 0.25 * (1.0 + std::abs(k1[0]));

    if (err <= 1.0 && !slope_jump) {
      DenseStep ds;
      ds.r0 = r;
      ds.h = h;
      for (int c = 0; c < 2; ++c) {
        const double ydiff = ynew[c] - y[c];
        const double bspl = h * k1[c] - ydiff;
        std::array<double, 5> cc{};
        cc[0] = y[c];
        cc[1] = ydiff;
        cc[2] = bspl;
        cc[3] = ydiff - h * k7[c] - bspl;
        cc[4] = h * (D1 * k1[c] + D3 * k3[c] + D4 * k4[c] + D5 * k5[c] +
                     D6 * k6[c] + D7 * k7[c]);
        if (c == 0) ds.cu = cc; else ds.cv = cc;
      }
      traj.dense.push_back(ds);

      const double u_prev = y[0];
      r += h;
      y = ynew;
      k1 = k7;  // FSAL
      traj.r.push_back(r);
      traj.u.push_back(y[0]);
      traj.du.push_back(k1[0]);
      traj.v.push_back(y[1]);
      traj.dv.push_back(k1[1]);

      if (u_prev * y[0] < 0.0) {
        if (++zero_count >= max_zero_count && max_zero_count > 0) {
          traj.status = TrajStatus::zero_budget;
          break;
        }
      }
      const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      h *= err > 1.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.5;
    }
  }
  return traj;
}

Trajectory integrate_trajectory(const ProblemParams& params, const PhiSpec& phi,
                                const FSpec& f, double r_max, int max_zero_count,
                                const SolverOptions& opts) {
  if (!(r_max > 0.0)) throw std::domain_error("integrate_trajectory: r_max <= 0");
  double eps = opts.eps0 > 0.0 ? opts.eps0 : 1e-3 * std::min(1.0, r_max);
  eps = std::min(eps, 0.5 * r_max);

  Trajectory head = picard_start(params, phi, f, eps);
  Trajectory tail =
      continue_trajectory(params, phi, f, head.r.back(), head.u.back(),
                          head.v.back(), r_max, max_zero_count, opts);

  Trajectory traj;
  traj.d = params.d;
  traj.status = tail.status;
  traj.err_scale = tail.err_scale;
  traj.r = std::move(head.r);
  traj.u = std::move(head.u);
  traj.du = std::move(head.du);
  traj.v = std::move(head.v);
  traj.dv = std::move(head.dv);
  for (std::size_t i = 1; i < tail.r.size(); ++i) {
    traj.r.push_back(tail.r[i]);
    traj.u.push_back(tail.u[i]);
    traj.du.push_back(tail.du[i]);
    traj.v.push_back(tail.v[i]);
    traj.dv.push_back(tail.dv[i]);
  }
  traj.dense = std::move(tail.dense);
  return traj;
}

double integral_residual(const Trajectory& traj, const ProblemParams& params,
                         const PhiSpec& phi, const FSpec& f) {
  (void)phi;
  if (traj.size() == 0) return 0.0;
  // 7-point Gauss-Legendre
  static const double gx[7] = {-0.9491079123427585, -0.7415311855993945,
                               -0.4058451513773972, 0.0,
                               0.4058451513773972,  0.7415311855993945,
                               0.9491079123427585};
  static const double gw[7] = {0.1294849661688697, 0.2797053914892766,
                               0.3818300505051189, 0.4179591836734694,
                               0.3818300505051189, 0.2797053914892766,
                               0.1294849661688697};
  double Q = 0.0, worst = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double a = traj.r[i], b = traj.r[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double seg = 0.0;
    for (int g = 0; g < 7; ++g) {
      const double t = mid + half * gx[g];
      seg += gw[g] * std::pow(t, params.gamma) * f_eval(f, traj.eval_u(t));
    }
    Q += half * seg;
    const double v = traj.v[i + 1];
    worst = std::max(worst, std::abs(v + params.lambda * Q) / (1.0 + std::abs(v)));
  }
  return worst;
}

}  // namespace nodal
