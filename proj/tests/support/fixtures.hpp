#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "crysl/compile/compiled_rule.hpp"
#include "interpreter.hpp"

namespace crysl::testing {

std::filesystem::path fixturePath(const std::string& relative);
std::string readText(const std::filesystem::path& path);

// The four-rule fixture ruleset, compiled once.
const compile::CompiledRuleSet& fixtureRules();

// A `.expect` file next to a concordance program lists every static
// finding as "<Category> <line>"; findings no path of the program exhibits
// carry an "artifact: <reason>" annotation.
struct Expectation {
  std::set<Violation> findings;
  std::set<Violation> artifacts;
};
Expectation readExpectation(const std::filesystem::path& path);

struct ConcordanceResult {
  std::size_t paths = 0;
  std::set<Violation> dynamic;
  std::set<Violation> statik;
  std::set<Violation> missed;       // dynamic, not static
  std::set<Violation> unexplained;  // static only, not annotated
  std::set<Violation> unexpected;   // static, not in the expectation
  std::set<Violation> absent;       // expected, not static

  bool ok() const {
    return missed.empty() && unexplained.empty() && unexpected.empty() && absent.empty();
  }
};

// Runs the analyzer and the path interpreter on one program and compares
// them with each other and with the expectation file beside it.
ConcordanceResult checkConcordance(const std::filesystem::path& program,
                                   const compile::CompiledRuleSet& rules);

std::vector<std::filesystem::path> concordancePrograms();

}  // namespace crysl::testing
