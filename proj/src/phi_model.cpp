#include "nodal/phi_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

double quad(const std::function<double(double)>& g, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, a, b, 12, 1e-12);
}

}  // namespace

PhiSpec PhiSpec::power_law(double p) {
  if (!(p > 1.0)) throw std::domain_error("power phi requires p > 1");
  PhiSpec s;
  s.family = PhiFamily::power;
  s.p = s.q = p;
  s.gamma1 = s.gamma2 = p;
  s.Gamma1 = std::min(1.0, p - 1.0);
  s.h_at_1 = 1.0;
  return s;
}

PhiSpec PhiSpec::sum_of_powers_law(double p, double q) {
  if (!(p > 1.0) || !(q >= p))
    throw std::domain_error("sum_of_powers phi requires 1 < p <= q");
  PhiSpec s;
  s.family = PhiFamily::sum_of_powers;
  s.p = p;
  s.q = q;
  s.gamma1 = p;
  s.gamma2 = q;
  s.Gamma1 = std::min(1.0, p - 1.0);
  s.h_at_1 = 2.0;
  return s;
}

PhiSpec PhiSpec::custom(std::function<double(double)> phi,
                        std::function<double(double)> dphi,
                        double gamma1, double gamma2) {
  if (!(gamma1 > 1.0) || !(gamma2 >= gamma1))
    throw std::domain_error("custom phi requires 1 < gamma1 <= gamma2");
  PhiSpec s;
  s.family = PhiFamily::custom;
  s.phi_fn = std::move(phi);
  s.dphi_fn = std::move(dphi);
  s.gamma1 = gamma1;
  s.gamma2 = gamma2;
  s.Gamma1 = std::min(1.0, gamma1 - 1.0);
  s.h_at_1 = s.phi_fn(1.0);
  return s;
}

double PhiSpec::phi(double t) const {
  switch (family) {
    case PhiFamily::power: return std::pow(t, p - 2.0);
    case PhiFamily::sum_of_powers: return std::pow(t, p - 2.0) + std::pow(t, q - 2.0);
    case PhiFamily::custom: return phi_fn(t);
  }
  return 0.0;
}

double PhiSpec::dphi(double t) const {
  switch (family) {
    case PhiFamily::power:
      return (p - 2.0) * std::pow(t, p - 3.0);
    case PhiFamily::sum_of_powers:
      return (p - 2.0) * std::pow(t, p - 3.0) + (q - 2.0) * std::pow(t, q - 3.0);
    case PhiFamily::custom:
      if (dphi_fn) return dphi_fn(t);
      {
        const double step = t * 1e-6;
        return (phi_fn(t + step) - phi_fn(t - step)) / (2.0 * step);
      }
  }
  return 0.0;
}

double h_eval(const PhiSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("h_eval: t < 0");
  if (t == 0.0) return 0.0;
  switch (spec.family) {
    case PhiFamily::power: return std::pow(t, spec.p - 1.0);
    case PhiFamily::sum_of_powers:
      return std::pow(t, spec.p - 1.0) + std::pow(t, spec.q - 1.0);
    case PhiFamily::custom: return t * spec.phi_fn(t);
  }
  return 0.0;
}

double dh_eval(const PhiSpec& spec, double t) {
  switch (spec.family) {
    case PhiFamily::power:
      return (spec.p - 1.0) * std::pow(t, spec.p - 2.0);
    case PhiFamily::sum_of_powers:
      return (spec.p - 1.0) * std::pow(t, spec.p - 2.0) +
             (spec.q - 1.0) * std::pow(t, spec.q - 2.0);
    case PhiFamily::custom:
      return spec.phi(t) + t * spec.dphi(t);
  }
  return 0.0;
}

double h_inverse(const PhiSpec& spec, double s) {
  if (s < 0.0) throw std::domain_error("h_inverse: s < 0");
  if (s == 0.0) return 0.0;
  if (spec.family == PhiFamily::power) return std::pow(s, 1.0 / (spec.p - 1.0));

  // Bracket from the h sandwich: the root lies between (s/h(1))^{1/(g2-1)}
  // and (s/h(1))^{1/(g1-1)} below s = h(1), exponents swapped above.
  const double h1 = spec.h_at_1, g1 = spec.gamma1, g2 = spec.gamma2;
  double lo, hi;
  if (s <= h1) {
    lo = std::pow(s / h1, 1.0 / (g2 - 1.0));
    hi = std::pow(s / h1, 1.0 / (g1 - 1.0));
  } else {
    lo = std::pow(s / h1, 1.0 / (g1 - 1.0));
    hi = std::pow(s / h1, 1.0 / (g2 - 1.0));
  }
  if (lo > hi) std::swap(lo, hi);
  for (int i = 0; i < 64 && h_eval(spec, lo) > s; ++i) lo *= 0.5;
  for (int i = 0; i < 64 && h_eval(spec, hi) < s; ++i) hi *= 2.0;

  // Newton in log coordinates: d log h / d log t = t h'/h stays inside
  // [gamma1-1, gamma2-1], so the iteration is stable over any magnitude.
  const double ls = std::log(s);
  double ulo = std::log(lo), uhi = std::log(hi);
  double u = 0.5 * (ulo + uhi);
  for (int iter = 0; iter < 200; ++iter) {
    const double t = std::exp(u);
    const double ht = h_eval(spec, t);
    const double F = std::log(ht) - ls;
    if (std::abs(F) <= 1e-14 || uhi - ulo <= 1e-15) return t;
    if (F > 0.0) uhi = u; else ulo = u;
    const double dF = t * dh_eval(spec, t) / ht;
    double un = u - F / dF;
    if (!std::isfinite(un) || un <= ulo || un >= uhi) un = 0.5 * (ulo + uhi);
    u = un;
  }
  throw NumericError("h_inverse: no convergence", std::exp(ulo), std::exp(uhi));
}

double Phi_eval(const PhiSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("Phi_eval: t < 0");
  if (t == 0.0) return 0.0;
  switch (spec.family) {
    case PhiFamily::power:
      return std::pow(t, spec.p) / spec.p;
    case PhiFamily::sum_of_powers:
      return std::pow(t, spec.p) / spec.p + std::pow(t, spec.q) / spec.q;
    case PhiFamily::custom:
      return quad([&spec](double s) { return s * spec.phi_fn(s); }, 0.0, t);
  }
  return 0.0;
}

double H_eval(const PhiSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("H_eval: t < 0");
  if (t == 0.0) return 0.0;
  switch (spec.family) {
    case PhiFamily::power:
      return (spec.p - 1.0) / spec.p * std::pow(t, spec.p);
    case PhiFamily::sum_of_powers:
      return (spec.p - 1.0) / spec.p * std::pow(t, spec.p) +
             (spec.q - 1.0) / spec.q * std::pow(t, spec.q);
    case PhiFamily::custom:
      return t * t * spec.phi_fn(t) - Phi_eval(spec, t);
  }
  return 0.0;
}

ValidationReport validate_phi(const PhiSpec& spec, const PhiValidateOptions& opts) {
  ValidationReport rep;
  const int n = std::max(2, opts.samples);
  const double lr = std::log(opts.t_lo), ur = std::log(opts.t_hi);

  std::vector<double> t(n), h(n);
  int eval_failures = 0;
  for (int i = 0; i < n; ++i) {
    t[i] = std::exp(lr + (ur - lr) * i / (n - 1));
    try {
      h[i] = h_eval(spec, t[i]);
    } catch (const std::exception&) {
      h[i] = std::numeric_limits<double>::quiet_NaN();
      ++eval_failures;
    }
  }
  const double h1 = h_eval(spec, 1.0);

  {
    CheckResult c{"phi1_i"};
    const bool ok = std::isfinite(h.front()) && h.front() <= 1e-4 * h1;
    c.verdict = ok ? Verdict::pass : Verdict::fail;
    c.margin = 1e-4 * h1 - h.front();
    std::ostringstream os;
    os << "h(" << t.front() << ")=" << h.front();
    c.detail = os.str();
    rep.checks.push_back(c);
  }
  {
    CheckResult c{"phi1_ii"};
    const bool ok = h.back() >= 1e4 * h1;  // inf counts as pass
    c.verdict = ok ? Verdict::pass : Verdict::fail;
    c.margin = h.back() - 1e4 * h1;
    rep.checks.push_back(c);
  }
  {
    CheckResult c{"phi2"};
    double worst = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (int i = 0; i + 1 < n; ++i) {
      if (!(h[i + 1] > h[i])) ++bad;
      worst = std::min(worst, h[i + 1] - h[i]);
    }
    c.verdict = (bad == 0) ? Verdict::pass : Verdict::fail;
    c.margin = worst;
    if (bad) c.detail = std::to_string(bad) + " non-increasing sample pairs";
    rep.checks.push_back(c);
  }
  {
    // (phi3) in ratio form: (t phi)'/phi = h'/phi must stay in
    // [gamma1-1, gamma2-1].
    CheckResult c{"phi3"};
    double rho_min = std::numeric_limits<double>::infinity();
    double rho_max = -rho_min;
    int bad = 0;
    for (int i = 0; i < n; ++i) {
      double rho;
      try {
        rho = dh_eval(spec, t[i]) / spec.phi(t[i]);
      } catch (const std::exception&) {
        ++bad;
        continue;
      }
      if (!std::isfinite(rho)) {
        ++bad;
        continue;
      }
      rho_min = std::min(rho_min, rho);
      rho_max = std::max(rho_max, rho);
      const double slack = 1e-7 * (1.0 + std::abs(rho));
      if (rho < spec.gamma1 - 1.0 - slack || rho > spec.gamma2 - 1.0 + slack) ++bad;
    }
    c.verdict = (bad == 0) ? Verdict::pass : Verdict::fail;
    c.margin = std::min(rho_min - (spec.gamma1 - 1.0), (spec.gamma2 - 1.0) - rho_max);
    std::ostringstream os;
    os << "tight exponent range [" << rho_min + 1.0 << ", " << rho_max + 1.0 << "]";
    if (bad) os << ", " << bad << " violations";
    c.detail = os.str();
    rep.checks.push_back(c);
  }
  if (spec.family == PhiFamily::custom && !spec.dphi_fn) {
    CheckResult c{"phi_smoothness"};
    c.verdict = opts.strict ? Verdict::fail : Verdict::inconclusive;
    c.detail = "custom phi without analytic derivative; using central differences";
    rep.checks.push_back(c);
  }
  if (eval_failures > 0) {
    CheckResult c{"evaluator"};
    c.verdict = Verdict::fail;
    c.detail = std::to_string(eval_failures) + " sample-point evaluation failures";
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace nodal
