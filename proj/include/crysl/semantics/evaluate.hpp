#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crysl/semantics/sat.hpp"

namespace crysl::semantics {

// Predicate argument; nullopt where the generating or querying side has no
// value (wildcard or unbound variable), which matches any value.
using PredicateArgs = std::vector<std::optional<RuntimeValue>>;

struct ObjectVerdict {
  RuntimeValue base;
  std::string specType;
  std::vector<std::size_t> indices;  // trace positions of the object's events

  bool forbiddenOk = true;
  bool orderOk = true;
  bool constraintsOk = true;
  // Trace positions of the first failure of each kind. An order failure
  // without a position means the trace ended outside an accepting state.
  std::optional<std::size_t> forbiddenAt;
  std::optional<std::size_t> orderRejectedAt;
  std::optional<std::size_t> constraintFailedAt;
  std::string forbiddenSignature;
  std::string failedConstraint;

  bool sat() const { return forbiddenOk && orderOk && constraintsOk; }
};

struct PredicateInstance {
  std::string name;
  PredicateArgs args;
  std::size_t ensuredAt = 0;
  std::optional<std::size_t> killedAt;
  RuntimeValue base;  // object whose rule ensured it
  std::string specType;

  // Visible to a query made at trace position i: ensured strictly before i
  // and not killed before i.
  bool visibleAt(std::size_t i) const {
    return ensuredAt < i && !(killedAt && *killedAt < i);
  }
};

struct UnsatisfiedRequirement {
  RuntimeValue base;
  std::string specType;
  std::size_t clause = 0;  // index into the rule's REQUIRES
  std::string spelling;
  std::size_t at = 0;      // trace position of the first failed check
};

struct TraceVerdict {
  std::vector<ObjectVerdict> objects;
  std::vector<PredicateInstance> pool;
  std::vector<UnsatisfiedRequirement> unsatisfied;

  bool ok() const;
  // A pool instance named `name` whose arguments match `args`, visible at
  // trace position `at`.
  bool available(const std::string& name, const PredicateArgs& args,
                 std::size_t at) const;
};

bool argsMatch(const PredicateArgs& a, const PredicateArgs& b);

// Evaluates every object trace with sat^o, then replays the trace in order
// to build the predicate pool. At each event of an object with a rule:
//   1. REQUIRES clauses for which the event is a checkpoint are queried;
//   2. instances matching a NEGATES clause of a state the event entered are
//      killed;
//   3. ENSURES clauses of a state the event entered are generated when the
//      object's trace up to this event is free of forbidden events and
//      constraint violations and every REQUIRES clause has been checked
//      and satisfied so far.
// A REQUIRES clause is checked at the events binding one of its relevant
// variables (see CompiledRule::relevantVariables), or at the object's first
// event when it has none.
TraceVerdict evaluateTrace(const RuntimeTrace& trace,
                           const compile::CompiledRuleSet& rules);

}  // namespace crysl::semantics
