#include "crysl/analysis/finding.hpp"

#include <algorithm>
#include <tuple>

namespace crysl::analysis {

const char* toString(Category c) {
  switch (c) {
    case Category::ConstraintViolation: return "ConstraintViolation";
    case Category::OrderError: return "OrderError";
    case Category::ForbiddenMethod: return "ForbiddenMethod";
    case Category::UnsatisfiedPredicate: return "UnsatisfiedPredicate";
  }
  return "?";
}

bool operator<(const Finding& a, const Finding& b) {
  return std::tie(a.file, a.pos.line, a.category, a.pos.column, a.ruleType, a.message) <
         std::tie(b.file, b.pos.line, b.category, b.pos.column, b.ruleType, b.message);
}

void sortFindings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end());
}

}  // namespace crysl::analysis
