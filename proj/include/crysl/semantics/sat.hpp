#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crysl/compile/compiled_rule.hpp"
#include "crysl/semantics/trace.hpp"

namespace crysl::semantics {

using Env = std::map<std::string, RuntimeValue>;

// The events of one base object whose type has a rule, in trace order. Each
// event is kept with the rule's event patterns it matches; an event that
// only matches a FORBIDDEN signature has an empty `matched` set.
struct ObjectTrace {
  RuntimeValue base;
  const compile::CompiledRule* rule = nullptr;
  std::vector<std::size_t> indices;  // positions in the runtime trace
  std::vector<Event> events;
  std::vector<std::set<compile::EventId>> matched;
  std::vector<const compile::ForbiddenEntry*> forbidden;

  std::size_t size() const { return events.size(); }
};

// One ObjectTrace per base object with a rule, ordered by first occurrence.
// Events matching neither an event pattern nor a forbidden signature of the
// rule are dropped.
std::vector<ObjectTrace> projectObjectTraces(
    const RuntimeTrace& trace, const compile::CompiledRuleSet& rules);

bool satForbidden(const ObjectTrace& ot);
std::optional<std::size_t> firstForbidden(const ObjectTrace& ot);

// Automaton run over the events of an object trace. Events whose patterns
// do not occur in ORDER leave the state set unchanged.
struct OrderRun {
  std::vector<compile::StateSet> after;  // state set after each event
  std::vector<bool> stepped;             // event moved the automaton
  std::optional<std::size_t> rejectedAt; // first event with no transition
  bool accepted = false;
};

OrderRun runOrder(const ObjectTrace& ot);
bool satOrder(const ObjectTrace& ot);

// Substring before the first '/', or the whole string.
std::string alg(const std::string& transformation);

// Applies an auxiliary function (or none) to a value. Throws Error(Kind)
// when the function does not accept the value.
RuntimeValue applyFunction(const std::optional<std::string>& function,
                           const RuntimeValue& value);

// Variables bound by the events of an object trace up to and including
// event `k`; a later binding of the same variable replaces an earlier one.
// FORBIDDEN-only events bind nothing.
Env accumulatedEnv(const ObjectTrace& ot, std::size_t k);

// c(e). A membership test on a variable the environment does not bind (or
// binds to Unknown) holds vacuously; an implication fails only when its
// left side definitely holds and its right side fails. Throws Error(Kind)
// when a value and the listed constants differ in kind.
bool holds(const frontend::ConstraintExpr& c, const Env& env);

// First event whose accumulated environment violates a constraint, with
// the index of that constraint.
struct ConstraintFailure {
  std::size_t event;
  std::size_t constraint;
};
std::optional<ConstraintFailure> firstConstraintFailure(const ObjectTrace& ot);
bool satConstraints(const ObjectTrace& ot);

bool sat(const ObjectTrace& ot);

}  // namespace crysl::semantics
