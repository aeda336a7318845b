#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crysl/compile/nfa.hpp"
#include "crysl/frontend/validate.hpp"

namespace crysl::compile {

enum class Polarity { Ensure, Negate };

struct GeneratedPredicate {
  std::size_t clause;  // index into CompiledRule::ensures or ::negates
  Polarity polarity;

  friend bool operator==(const GeneratedPredicate&,
                         const GeneratedPredicate&) = default;
  friend auto operator<=>(const GeneratedPredicate&,
                          const GeneratedPredicate&) = default;
};

// Maps each automaton state to the ENSURES clauses it generates and the
// NEGATES clauses it kills.
class PredicateGenMap {
 public:
  explicit PredicateGenMap(int stateCount = 0) : byState_(stateCount) {}

  void add(StateId s, GeneratedPredicate p) { byState_.at(s).insert(p); }
  const std::set<GeneratedPredicate>& at(StateId s) const {
    return byState_.at(s);
  }
  bool generates(StateId s, std::size_t ensureClause) const {
    return byState_.at(s).count({ensureClause, Polarity::Ensure}) > 0;
  }
  bool negates(StateId s, std::size_t negateClause) const {
    return byState_.at(s).count({negateClause, Polarity::Negate}) > 0;
  }
  // States that generate the given ENSURES clause.
  StateSet generatingStates(std::size_t ensureClause) const;
  int stateCount() const { return static_cast<int>(byState_.size()); }

 private:
  std::vector<std::set<GeneratedPredicate>> byState_;
};

struct ForbiddenEntry {
  std::string methodName;
  std::vector<std::string> paramTypes;
  std::optional<std::string> replacement;
  SourcePos pos;

  std::string signature() const;
};

struct CompiledRule {
  std::string specType;
  std::string file;
  Nfa nfa;
  PredicateGenMap genMap;
  std::vector<frontend::ConstraintExpr> constraints;
  std::vector<ForbiddenEntry> forbiddenIndex;
  std::vector<frontend::PredicateClause> requirements;
  std::vector<frontend::PredicateClause> ensures;
  std::vector<frontend::PredicateClause> negates;
  std::vector<frontend::EventDecl> eventTable;  // EventId = index
  std::map<std::string, std::string> varTypes;
  std::map<std::string, std::vector<EventId>> labelEvents;
  frontend::OrderExpr order;

  // Declared type of a rule variable ("" for the wildcard), spec type for
  // "this".
  std::string typeOf(const std::string& var) const;
  // Declared parameter types of an event; "" for wildcard positions.
  std::vector<std::string> paramTypes(EventId event) const;

  // Event patterns matching a call by name, arity and parameter type
  // compatibility. Several patterns may match one call.
  std::set<EventId> matchEvents(const std::string& methodName,
                                const std::vector<std::string>& argTypes,
                                const frontend::TypeRegistry& types) const;
  // Forbidden entry with the same name and exactly the same parameter types.
  const ForbiddenEntry* matchForbidden(
      const std::string& methodName,
      const std::vector<std::string>& argTypes) const;

  // Rule variables an event binds (parameters and return binding).
  std::set<std::string> boundVariables(EventId event) const;
  const std::string& label(EventId event) const {
    return eventTable.at(event).label;
  }

  // Variables of a REQUIRES clause whose binding events are the points where
  // the clause is checked: its object-typed variables if any, otherwise all
  // of its variables. Empty when the clause only mentions this/_.
  std::set<std::string> relevantVariables(
      const frontend::PredicateClause& clause) const;
};

// ORDER -> ε-free NFA. Thompson construction followed by ε-elimination;
// states are renumbered breadth-first from the initial state (0) so the
// numbering is stable across runs.
Nfa compileOrder(const frontend::OrderExpr& order,
                 const std::map<std::string, std::vector<EventId>>& labelEvents);

// Throws Error(AnchorNotInAutomaton) when an `after` label has no
// transition in the automaton.
PredicateGenMap annotatePredicates(
    const Nfa& nfa, const std::vector<frontend::PredicateClause>& ensures,
    const std::vector<frontend::PredicateClause>& negates,
    const std::map<std::string, std::vector<EventId>>& labelEvents);

// True when NEGATES clause `negation` kills ENSURES clause `generation`:
// equal names and arity, and every position where neither side is the
// wildcard names the same variable.
bool negationMatches(const frontend::PredicateClause& negation,
                     const frontend::PredicateClause& generation);

CompiledRule compileRule(const frontend::ResolvedRule& rule);

struct CompiledRuleSet {
  frontend::TypeRegistry types;
  std::vector<CompiledRule> rules;
  std::string fingerprint;

  const CompiledRule* find(const std::string& specType) const;
};

CompiledRuleSet compileRuleset(const frontend::Ruleset& ruleset);

// Graphviz rendering; nodes are "state N", edges carry event labels.
std::string toDot(const CompiledRule& rule);

// "javax.crypto.spec.PBEKeySpec" -> "PBEKeySpec"
std::string simpleName(const std::string& qualified);

}  // namespace crysl::compile
