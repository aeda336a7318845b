#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crysl/error.hpp"
#include "crysl/minij/ir.hpp"

namespace crysl::analysis {

// Declaration order is the order used when sorting and summarizing.
enum class Category { ConstraintViolation, OrderError, ForbiddenMethod, UnsatisfiedPredicate };

const char* toString(Category c);

struct Finding {
  Category category = Category::OrderError;
  std::string file;
  SourcePos pos;
  std::optional<minij::NodeId> site;
  SourcePos sitePos;
  std::string ruleType;
  std::string message;
  std::map<std::string, std::string> details;
};

bool operator<(const Finding& a, const Finding& b);

void sortFindings(std::vector<Finding>& findings);

}  // namespace crysl::analysis
