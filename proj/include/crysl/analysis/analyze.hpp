#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crysl/analysis/finding.hpp"
#include "crysl/analysis/typestate.hpp"
#include "crysl/analysis/values.hpp"

namespace crysl::analysis {

struct AnalysisConfig {
  std::chrono::milliseconds budget{10000};  // per allocation site
  // Functions whose name starts with one of these are not analyzed: their
  // allocation sites and forbidden calls are ignored.
  std::vector<std::string> excludePrefixes;
};

bool isExcluded(const std::string& function, const AnalysisConfig& config);

// One finding per reachable call whose callee matches a FORBIDDEN signature
// of the rule for the receiver's declared type, the constructed type, or
// the static call's type.
std::vector<Finding> scanForbidden(const minij::ProgramIr& ir, const minij::CallGraph& cg,
                                   const compile::CompiledRuleSet& rules,
                                   const AnalysisConfig& config = {});

// Rule variable -> binding statement -> values bound there.
using Bindings = std::map<std::string, std::map<NodeId, ValueSet>>;

Bindings siteBindings(const SiteTypestate& ts, const minij::ProgramIr& ir,
                      ValueExtractor& values);

// Constraints of the site's rule over the values bound at its events.
// Constraints mentioning a variable no event of the site binds are skipped.
// A membership test fails at a binding statement when a value there is not
// listed or cannot be determined; an implication's right side is checked
// when some value may satisfy its left side.
std::vector<Finding> solveConstraints(const SiteTypestate& ts, const minij::ProgramIr& ir,
                                      ValueExtractor& values);

struct SiteAnalysis {
  SiteTypestate typestate;
  std::vector<Finding> constraintFindings;
  Bindings bindings;
};

// A predicate instance some site may hold at a statement.
struct StaticPredicate {
  NodeId site;
  std::size_t clause;  // index into the site rule's ENSURES
  std::string name;
  std::vector<std::optional<ValueSet>> args;  // nullopt: any value
};

struct PredicateResolution {
  std::set<NodeId> ensuringSites;
  std::map<NodeId, std::vector<StaticPredicate>> ensuredAt;
  std::vector<Finding> findings;
  int iterations = 0;
};

// Least fixed point over the sites: a site ensures its predicates when it
// has no forbidden call, order error or constraint violation and each of
// its REQUIRES clauses is met at every event binding the clause's
// variables. A clause is met at a statement when one ensuring site is in a
// generating state there on every path and each argument position is
// either unconstrained or has the same single known value on both sides.
PredicateResolution resolvePredicates(const std::vector<SiteAnalysis>& sites,
                                      const minij::ProgramIr& ir);

struct SkippedSite {
  NodeId node;
  SourcePos pos;
  std::string type;
  std::string reason;
};

struct PhaseTimings {
  std::chrono::microseconds callGraph{0};
  std::chrono::microseconds typestate{0};
  std::chrono::microseconds constraints{0};
  std::chrono::microseconds predicates{0};

  std::chrono::microseconds total() const {
    return callGraph + typestate + constraints + predicates;
  }
};

struct AnalysisReport {
  std::string programFile;
  std::string programFingerprint;
  std::string rulesetFingerprint;
  std::vector<Finding> findings;  // sorted
  std::vector<SkippedSite> skipped;
  PhaseTimings timings;

  std::size_t count(Category c) const;
};

AnalysisReport analyzeProgram(const minij::Program& program,
                              const compile::CompiledRuleSet& rules,
                              const AnalysisConfig& config = {});

}  // namespace crysl::analysis
