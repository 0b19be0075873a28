#include "nodal/report.hpp"

#include <sstream>

namespace nodal {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

bool ValidationReport::passed() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::fail) return false;
  return true;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << "(" << c.name << ") " << verdict_name(c.verdict)
       << "  margin=" << c.margin;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  return os.str();
}

}  // namespace nodal
