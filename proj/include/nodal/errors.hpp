#ifndef NODAL_ERRORS_HPP
#define NODAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nodal {

// Iterative scheme failed to converge within its cap.  Carries the final
// bracket when the scheme was bracketed.
struct NumericError : std::runtime_error {
  double bracket_lo;
  double bracket_hi;
  NumericError(const std::string& what, double lo = 0.0, double hi = 0.0)
      : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
};

// A parameter scan exhausted its range without finding a sign change of the
// search predicate.
struct NotBracketedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nodal

#endif
