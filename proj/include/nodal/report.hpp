#ifndef NODAL_REPORT_HPP
#define NODAL_REPORT_HPP

#include <string>
#include <vector>

namespace nodal {

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v);

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string n) : name(std::move(n)) {}

  std::string name;
  Verdict verdict = Verdict::pass;
  // Worst slack observed; negative means the check was violated by |margin|.
  double margin = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_string() const;
};

}  // namespace nodal

#endif
