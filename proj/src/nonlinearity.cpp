#include "nodal/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nodal {

namespace {

double quad(const std::function<double(double)>& g, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, a, b, 12, 1e-12);
}

}  // namespace

FSpec FSpec::power_law(double delta, double d_infinity) {
  if (!(delta > 0.0)) throw std::domain_error("power f requires delta > 0");
  if (!(d_infinity > 0.0)) throw std::domain_error("d_infinity must be positive");
  FSpec s;
  s.family = FFamily::power;
  s.delta = delta;
  s.d_infinity = d_infinity;
  return s;
}

FSpec FSpec::arctan(double d_infinity) {
  if (!(d_infinity > 0.0)) throw std::domain_error("d_infinity must be positive");
  FSpec s;
  s.family = FFamily::arctan;
  s.d_infinity = d_infinity;
  return s;
}

FSpec FSpec::custom(std::function<double(double)> f, double d_infinity,
                    std::function<double(double)> F) {
  if (!(d_infinity > 0.0)) throw std::domain_error("d_infinity must be positive");
  FSpec s;
  s.family = FFamily::custom;
  s.f_fn = std::move(f);
  s.F_fn = std::move(F);
  s.d_infinity = d_infinity;
  return s;
}

double f_eval(const FSpec& spec, double t) {
  switch (spec.family) {
    case FFamily::power:
      if (t == 0.0) return 0.0;
      return std::copysign(std::pow(std::abs(t), spec.delta), t);
    case FFamily::arctan:
      return std::atan(t);
    case FFamily::custom:
      return spec.f_fn(t);
  }
  return 0.0;
}

double F_eval(const FSpec& spec, double t) {
  switch (spec.family) {
    case FFamily::power:
      return std::pow(std::abs(t), spec.delta + 1.0) / (spec.delta + 1.0);
    case FFamily::arctan:
      return t * std::atan(t) - 0.5 * std::log1p(t * t);
    case FFamily::custom:
      if (spec.F_fn) return spec.F_fn(t);
      if (t == 0.0) return 0.0;
      return quad(spec.f_fn, 0.0, t);
  }
  return 0.0;
}

namespace {

// (f3') integrability test on one side: S_k = int_{nu_k}^{probe} g with
// nu_k = probe 2^{-k}.  Convergent iff the partial sums are Cauchy or the
// increments decay geometrically; divergent if they blow up or fail to decay.
CheckResult f3_side(const std::function<double(double)>& g, double probe,
                    const char* name) {
  CheckResult c{name};
  const int K = 40;
  std::vector<double> inc(K + 1, 0.0);
  double S = 0.0;
  double hi = probe;
  for (int k = 1; k <= K; ++k) {
    const double lo = probe * std::ldexp(1.0, -k);
    inc[k] = quad(g, lo, hi);
    S += inc[k];
    hi = lo;
    if (!std::isfinite(S) || S > 1e6) {
      c.verdict = Verdict::fail;
      c.margin = -S;
      c.detail = "partial integrals exceed 1e6";
      return c;
    }
  }
  const double ratio5 = inc[K] > 0.0 && inc[K - 5] > 0.0
                            ? std::pow(inc[K] / inc[K - 5], 0.2)
                            : 0.0;
  c.margin = S;
  std::ostringstream os;
  os << "S=" << S << " last-increment=" << inc[K] << " decay-ratio=" << ratio5;
  c.detail = os.str();
  if (inc[K] <= 1e-6 && ratio5 < 1.0) {
    c.verdict = Verdict::pass;  // Cauchy
  } else if (ratio5 <= 0.99) {
    c.verdict = Verdict::pass;  // geometric decay, finite tail
  } else if (ratio5 >= 0.999) {
    c.verdict = Verdict::fail;  // increments do not die out
  } else {
    c.verdict = Verdict::inconclusive;
  }
  return c;
}

}  // namespace

ValidationReport validate_f(const FSpec& spec, double gamma1, double probe) {
  if (!(gamma1 > 1.0)) throw std::domain_error("validate_f: gamma1 must exceed 1");
  if (!(probe > 0.0)) throw std::domain_error("validate_f: probe must be positive");
  ValidationReport rep;

  const int n = 2001;
  {
    CheckResult c{"f1"};
    double worst = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (int i = 0; i < n; ++i) {
      const double a = probe * std::exp(-12.0 * i / (n - 1));
      for (double t : {a, -a}) {
        const double s = t * f_eval(spec, t);
        worst = std::min(worst, s);
        if (!(s > 0.0)) ++bad;
      }
    }
    c.verdict = (bad == 0) ? Verdict::pass : Verdict::fail;
    c.margin = worst;
    rep.checks.push_back(c);
  }
  {
    CheckResult c{"f2"};
    const double lo = -probe, hi = spec.d_infinity;
    double prev = f_eval(spec, lo);
    double worst = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (int i = 1; i < n; ++i) {
      const double t = lo + (hi - lo) * i / (n - 1);
      const double ft = f_eval(spec, t);
      worst = std::min(worst, ft - prev);
      if (ft < prev - 1e-12 * (1.0 + std::abs(prev))) ++bad;
      prev = ft;
    }
    c.verdict = (bad == 0) ? Verdict::pass : Verdict::fail;
    c.margin = worst;
    rep.checks.push_back(c);
  }

  const double ex = -1.0 / (gamma1 - 1.0);
  rep.checks.push_back(f3_side(
      [&spec, ex](double t) { return std::pow(f_eval(spec, t), ex); }, probe,
      "f3_positive"));
  rep.checks.push_back(f3_side(
      [&spec, ex](double t) { return std::pow(-f_eval(spec, -t), ex); }, probe,
      "f3_negative"));
  {
    // combined (f3') verdict: worst of the two sides
    CheckResult c{"f3"};
    Verdict v = Verdict::pass;
    for (const char* side : {"f3_positive", "f3_negative"}) {
      const CheckResult* s = rep.find(side);
      if (s->verdict == Verdict::fail) v = Verdict::fail;
      else if (s->verdict == Verdict::inconclusive && v == Verdict::pass)
        v = Verdict::inconclusive;
    }
    c.verdict = v;
    rep.checks.push_back(c);
  }
  {
    // f in C^1 away from 0, warning-level finite-difference sampling
    CheckResult c{"f_c1"};
    int rough = 0;
    for (double t : {0.3 * probe, 0.7 * probe, -0.4 * probe, 0.9 * spec.d_infinity}) {
      const double s1 = std::abs(t) * 1e-5, s2 = s1 * 0.5;
      const double d1 = (f_eval(spec, t + s1) - f_eval(spec, t - s1)) / (2 * s1);
      const double d2 = (f_eval(spec, t + s2) - f_eval(spec, t - s2)) / (2 * s2);
      if (std::abs(d1 - d2) > 0.1 * (1.0 + std::abs(d1))) ++rough;
    }
    c.verdict = (rough == 0) ? Verdict::pass : Verdict::inconclusive;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace nodal
