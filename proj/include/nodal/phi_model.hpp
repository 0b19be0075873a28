#ifndef NODAL_PHI_MODEL_HPP
#define NODAL_PHI_MODEL_HPP

#include <functional>

#include "nodal/report.hpp"

namespace nodal {

enum class PhiFamily { power, sum_of_powers, custom };

// Growth model phi together with its derived functions
//   h(t)   = t phi(t)
//   Phi(t) = integral_0^t s phi(s) ds
//   H(t)   = t Phi'(t) - Phi(t)
// and the exponent window [gamma1, gamma2] that makes (t phi(t))'/phi(t)
// stay inside [gamma1 - 1, gamma2 - 1].
struct PhiSpec {
  PhiFamily family = PhiFamily::power;
  double p = 2.0;  // power: phi(t) = t^{p-2}
  double q = 2.0;  // sum_of_powers: phi(t) = t^{p-2} + t^{q-2}, 1 < p <= q

  // custom family evaluators; dphi_fn may be empty (central differences then)
  std::function<double(double)> phi_fn;
  std::function<double(double)> dphi_fn;

  double gamma1 = 2.0;
  double gamma2 = 2.0;
  double Gamma1 = 1.0;  // ellipticity constant min{1, gamma1 - 1}
  double h_at_1 = 1.0;  // h(1)

  static PhiSpec power_law(double p);
  static PhiSpec sum_of_powers_law(double p, double q);
  static PhiSpec custom(std::function<double(double)> phi,
                        std::function<double(double)> dphi,
                        double gamma1, double gamma2);

  double phi(double t) const;   // t > 0
  double dphi(double t) const;  // t > 0; central difference for custom without dphi_fn
};

double h_eval(const PhiSpec& spec, double t);
double dh_eval(const PhiSpec& spec, double t);  // h'(t), t > 0
double h_inverse(const PhiSpec& spec, double s);
double Phi_eval(const PhiSpec& spec, double t);
double H_eval(const PhiSpec& spec, double t);

struct PhiValidateOptions {
  int samples = 10000;
  double t_lo = 1e-6;
  double t_hi = 1e6;
  bool strict = false;  // reject custom specs without an analytic derivative
};

ValidationReport validate_phi(const PhiSpec& spec, const PhiValidateOptions& opts = {});

}  // namespace nodal

#endif
