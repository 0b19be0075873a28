#include "nodal/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace nodal {

EnergyProfile energy_profile(const Trajectory& traj, const ProblemParams& params,
                             const PhiSpec& phi, const FSpec& f) {
  EnergyProfile ep;
  ep.r = traj.r;
  ep.E.resize(traj.size());
  ep.E0 = params.lambda * F_eval(f, traj.d);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = traj.r[i];
    if (r == 0.0) {
      ep.E[i] = ep.E0;
    } else {
      ep.E[i] = std::pow(r, params.alpha - params.gamma) *
                    H_eval(phi, std::abs(traj.du[i])) +
                params.lambda * F_eval(f, traj.u[i]);
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < ep.E.size(); ++i)
    worst = std::max(worst, ep.E[i + 1] - ep.E[i]);
  ep.monotone_violation = worst;
  return ep;
}

ValidationReport check_prop1(const Trajectory& traj, const ProblemParams& params,
                             const PhiSpec& phi, const FSpec& f) {
  ValidationReport rep;
  const double Fd = F_eval(f, traj.d);
  const double slack = 1e-8 * (1.0 + params.lambda * Fd);

  CheckResult c1{"gradient_bound"};
  CheckResult c2{"potential_bound"};
  double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
  int bad1 = 0, bad2 = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = traj.r[i];
    const double lhs = H_eval(phi, std::abs(traj.du[i]));
    const double Fu = F_eval(f, traj.u[i]);
    const double w = (r == 0.0)
                         ? (params.gamma > params.alpha ? 0.0 : 1.0)
                         : std::pow(r, params.gamma - params.alpha);
    const double rhs = params.lambda * w * (Fd - Fu);
    m1 = std::min(m1, rhs - lhs);
    if (lhs > rhs + slack) ++bad1;
    m2 = std::min(m2, Fd - Fu);
    if (Fu > Fd + 1e-10) ++bad2;
  }
  c1.verdict = bad1 == 0 ? Verdict::pass : Verdict::fail;
  c1.margin = m1;
  c2.verdict = bad2 == 0 ? Verdict::pass : Verdict::fail;
  c2.margin = m2;
  rep.checks.push_back(c1);
  rep.checks.push_back(c2);
  return rep;
}

ValidationReport check_bounds_suite(const PhiSpec& phi, int samples) {
  ValidationReport rep;
  const int n = std::max(16, samples);
  const double g1 = phi.gamma1, g2 = phi.gamma2;
  const double h1 = h_eval(phi, 1.0), Phi1 = Phi_eval(phi, 1.0);

  CheckResult a1{"h_sandwich"}, al{"Phi_sandwich"}, d2{"delta2"},
      all{"hinv_derivative_bound"}, la4{"H_sandwich"}, la4m{"H_monotone"};
  double ma1 = std::numeric_limits<double>::infinity(), mal = ma1, md2 = ma1,
         mall = ma1, mla4 = ma1;
  int ba1 = 0, bal = 0, bd2 = 0, ball = 0, bla4 = 0, bla4m = 0;
  double prevH = -1.0;

  for (int i = 0; i < n; ++i) {
    const double t = std::exp(std::log(1e-6) +
                              (std::log(1e6) - std::log(1e-6)) * i / (n - 1));
    const double ht = h_eval(phi, t);
    const double Pt = Phi_eval(phi, t);
    const double Ht = H_eval(phi, t);
    const double lo1 = h1 * std::min(std::pow(t, g1 - 1), std::pow(t, g2 - 1));
    const double hi1 = h1 * std::max(std::pow(t, g1 - 1), std::pow(t, g2 - 1));
    {
      const double sl = 1e-9 * (1.0 + ht);
      ma1 = std::min(ma1, std::min(ht - lo1, hi1 - ht));
      if (ht < lo1 - sl || ht > hi1 + sl) ++ba1;
    }
    {
      const double lo = Phi1 * std::min(std::pow(t, g1), std::pow(t, g2));
      const double hi = Phi1 * std::max(std::pow(t, g1), std::pow(t, g2));
      const double sl = 1e-9 * (1.0 + Pt);
      mal = std::min(mal, std::min(Pt - lo, hi - Pt));
      if (Pt < lo - sl || Pt > hi + sl) ++bal;
    }
    {
      const double ratio = t * ht / Pt;  // t Phi'(t) / Phi(t)
      md2 = std::min(md2, std::min(ratio - g1, g2 - ratio));
      if (ratio < g1 - 1e-7 || ratio > g2 + 1e-7) ++bd2;
    }
    if (t <= 1.0) {
      // finite-difference [h^{-1}]'(t) against the sandwich-derived bound
      // t^{(2-g2)/(g2-1)} h(1)^{-1/(g2-1)} / (g1-1)
      const double st = t * 1e-6;
      const double fd =
          (h_inverse(phi, t + st) - h_inverse(phi, t - st)) / (2.0 * st);
      const double bound = std::pow(t, (2.0 - g2) / (g2 - 1.0)) *
                           std::pow(h1, -1.0 / (g2 - 1.0)) / (g1 - 1.0);
      const double sl = 1e-6 * (1.0 + bound);
      mall = std::min(mall, bound - fd);
      if (fd > bound + sl) ++ball;
    }
    {
      const double lo = (g1 - 1.0) * Pt, hi = (g2 - 1.0) * Pt;
      const double tp = t * ht;  // t Phi'(t)
      const double lo2 = (g1 - 1.0) / g1 * tp, hi2 = (g2 - 1.0) / g2 * tp;
      const double sl = 1e-9 * (1.0 + Ht);
      mla4 = std::min({mla4, Ht - lo, hi - Ht, Ht - lo2, hi2 - Ht});
      if (Ht < lo - sl || Ht > hi + sl || Ht < lo2 - sl || Ht > hi2 + sl) ++bla4;
    }
    if (!(Ht > prevH)) ++bla4m;
    prevH = Ht;
  }

  auto finish = [&rep](CheckResult& c, int bad, double margin) {
    c.verdict = bad == 0 ? Verdict::pass : Verdict::fail;
    c.margin = margin;
    if (bad) c.detail = std::to_string(bad) + " violations";
    rep.checks.push_back(c);
  };
  finish(a1, ba1, ma1);
  finish(al, bal, mal);
  finish(d2, bd2, md2);
  finish(all, ball, mall);
  finish(la4, bla4, mla4);
  finish(la4m, bla4m, 0.0);
  return rep;
}

namespace {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec3& a, int dim) { return std::sqrt(dot(a, a, dim)); }

// a(eta) = phi(|eta|) eta, continued by 0 at eta = 0
Vec3 field(const PhiSpec& phi, const Vec3& eta, int dim) {
  Vec3 out{0, 0, 0};
  const double m = norm(eta, dim);
  if (m == 0.0) return out;
  const double scale = h_eval(phi, m) / m;  // = phi(m)
  for (int i = 0; i < dim; ++i) out[i] = scale * eta[i];
  return out;
}

}  // namespace

ValidationReport check_simon(const PhiSpec& phi, int dim, int trials,
                             std::uint64_t seed) {
  ValidationReport rep;
  if (dim < 1 || dim > 3) throw std::domain_error("check_simon: dim must be 1..3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::normal_distribution<double> unit(0.0, 1.0);

  auto random_vec = [&]() {
    Vec3 v{0, 0, 0};
    const double scale = std::pow(10.0, mag(rng));
    for (int i = 0; i < dim; ++i) v[i] = scale * unit(rng);
    return v;
  };

  const double cgam = std::min(4.0, 4.0 * phi.Gamma1);
  CheckResult simon{"simon_monotonicity"};
  double worst = std::numeric_limits<double>::infinity();
  int bad = 0;

  auto check_pair = [&](const Vec3& e1, const Vec3& e2) {
    Vec3 diff{0, 0, 0};
    for (int i = 0; i < dim; ++i) diff[i] = e1[i] - e2[i];
    const double dn = norm(diff, dim);
    const Vec3 a1 = field(phi, e1, dim), a2 = field(phi, e2, dim);
    Vec3 da{0, 0, 0};
    for (int i = 0; i < dim; ++i) da[i] = a1[i] - a2[i];
    const double lhs = dot(da, diff, dim);
    const double rhs = dn == 0.0 ? 0.0
                                 : cgam * dn / (1.0 + norm(e1, dim) + norm(e2, dim)) *
                                       Phi_eval(phi, dn / 4.0);
    worst = std::min(worst, lhs - rhs);
    if (lhs < rhs - 1e-12 * (1.0 + std::abs(rhs))) ++bad;
  };

  check_pair(Vec3{0, 0, 0}, Vec3{0, 0, 0});
  check_pair(Vec3{1, 0, 0}, Vec3{0, 0, 0});
  {
    const Vec3 e = random_vec();
    check_pair(e, e);
    check_pair(e, Vec3{0, 0, 0});
  }
  for (int i = 0; i < trials; ++i) check_pair(random_vec(), random_vec());

  simon.verdict = bad == 0 ? Verdict::pass : Verdict::fail;
  simon.margin = worst;
  {
    std::ostringstream os;
    os << "dim=" << dim << " trials=" << trials << " seed=" << seed;
    if (bad) os << " violations=" << bad;
    simon.detail = os.str();
  }
  rep.checks.push_back(simon);

  // ellipticity spot check: the Jacobian quadratic form of eta -> phi(|eta|) eta
  CheckResult la2{"ellipticity"};
  double worst2 = std::numeric_limits<double>::infinity();
  int bad2 = 0;
  for (int i = 0; i < std::max(1, trials / 10); ++i) {
    Vec3 eta = random_vec(), xi = random_vec();
    const double m = norm(eta, dim);
    if (m == 0.0) continue;
    const double ph = phi.phi(m), dph = phi.dphi(m);
    const double q =
        ph * dot(xi, xi, dim) + dph * std::pow(dot(eta, xi, dim), 2) / m;
    const double rhs = phi.Gamma1 * ph * dot(xi, xi, dim);
    worst2 = std::min(worst2, q - rhs);
    if (q < rhs - 1e-10 * (1.0 + std::abs(rhs))) ++bad2;
  }
  la2.verdict = bad2 == 0 ? Verdict::pass : Verdict::fail;
  la2.margin = worst2;
  rep.checks.push_back(la2);
  return rep;
}

}  // namespace nodal
