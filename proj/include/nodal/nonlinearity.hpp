#ifndef NODAL_NONLINEARITY_HPP
#define NODAL_NONLINEARITY_HPP

#include <functional>

#include "nodal/report.hpp"

namespace nodal {

enum class FFamily { power, arctan, custom };

// Reaction term f and primitive F(t) = integral_0^t f.
// d_infinity is the ceiling of the region where f is required nondecreasing.
struct FSpec {
  FFamily family = FFamily::power;
  double delta = 1.0;  // power: f(t) = |t|^{delta-1} t
  double d_infinity = 1.0;

  std::function<double(double)> f_fn;  // custom
  std::function<double(double)> F_fn;  // custom, may be empty (quadrature then)

  static FSpec power_law(double delta, double d_infinity);
  static FSpec arctan(double d_infinity);
  static FSpec custom(std::function<double(double)> f, double d_infinity,
                      std::function<double(double)> F = {});
};

double f_eval(const FSpec& spec, double t);
double F_eval(const FSpec& spec, double t);

// Samples (f1), (f2) and runs the numeric integrability test for (f3')
// on [-probe, probe].
ValidationReport validate_f(const FSpec& spec, double gamma1, double probe);

}  // namespace nodal

#endif
