#include "crysl/compile/compiled_rule.hpp"

#include <algorithm>
#include <sstream>

namespace crysl::compile {

using frontend::PredicateClause;

StateSet PredicateGenMap::generatingStates(std::size_t ensureClause) const {
  StateSet out;
  for (StateId s = 0; s < stateCount(); ++s) {
    if (generates(s, ensureClause)) out.insert(s);
  }
  return out;
}

std::string ForbiddenEntry::signature() const {
  std::string out = methodName + "(";
  for (std::size_t i = 0; i < paramTypes.size(); ++i) {
    if (i) out += ",";
    out += paramTypes[i];
  }
  return out + ")";
}

std::string CompiledRule::typeOf(const std::string& var) const {
  if (var == frontend::kThis) return specType;
  auto it = varTypes.find(var);
  return it == varTypes.end() ? std::string() : it->second;
}

std::vector<std::string> CompiledRule::paramTypes(EventId event) const {
  std::vector<std::string> out;
  for (const auto& p : eventTable.at(event).params) out.push_back(typeOf(p));
  return out;
}

std::set<EventId> CompiledRule::matchEvents(
    const std::string& methodName, const std::vector<std::string>& argTypes,
    const frontend::TypeRegistry& types) const {
  std::set<EventId> out;
  for (EventId id = 0; id < static_cast<EventId>(eventTable.size()); ++id) {
    const auto& ev = eventTable[id];
    if (ev.methodName != methodName || ev.params.size() != argTypes.size()) {
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < argTypes.size() && ok; ++i) {
      ok = types.compatible(typeOf(ev.params[i]), argTypes[i]);
    }
    if (ok) out.insert(id);
  }
  return out;
}

const ForbiddenEntry* CompiledRule::matchForbidden(
    const std::string& methodName,
    const std::vector<std::string>& argTypes) const {
  for (const auto& f : forbiddenIndex) {
    if (f.methodName == methodName && f.paramTypes == argTypes) return &f;
  }
  return nullptr;
}

std::set<std::string> CompiledRule::boundVariables(EventId event) const {
  std::set<std::string> out;
  const auto& ev = eventTable.at(event);
  for (const auto& p : ev.params) {
    if (p != frontend::kWildcard && p != frontend::kThis) out.insert(p);
  }
  if (ev.returnBinding && *ev.returnBinding != frontend::kWildcard) {
    out.insert(*ev.returnBinding);
  }
  return out;
}

std::set<std::string> CompiledRule::relevantVariables(
    const PredicateClause& clause) const {
  std::set<std::string> all;
  std::set<std::string> objects;
  for (const auto& arg : clause.args) {
    if (arg.isWildcard() || arg.isThis()) continue;
    all.insert(arg.var);
    if (frontend::TypeRegistry::kindOf(typeOf(arg.var)) ==
        frontend::ValueKind::Other) {
      objects.insert(arg.var);
    }
  }
  return objects.empty() ? all : objects;
}

bool negationMatches(const PredicateClause& negation,
                     const PredicateClause& generation) {
  if (negation.name != generation.name ||
      negation.args.size() != generation.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < negation.args.size(); ++i) {
    const auto& n = negation.args[i];
    const auto& g = generation.args[i];
    if (n.isWildcard() || g.isWildcard()) continue;
    if (n.var != g.var || n.function != g.function) return false;
  }
  return true;
}

namespace {

// States entered by a transition on any event of `label`, or the accepting
// states when there is no anchor.
StateSet selectStates(const Nfa& nfa, const PredicateClause& clause,
                      const std::map<std::string, std::vector<EventId>>& labels) {
  if (!clause.afterAnchor) return nfa.accepting();
  const auto& events = labels.at(*clause.afterAnchor);
  StateSet out;
  for (StateId s = 0; s < nfa.stateCount(); ++s) {
    for (const auto& [ev, targets] : nfa.transitionsFrom(s)) {
      if (std::find(events.begin(), events.end(), ev) != events.end()) {
        out.insert(targets.begin(), targets.end());
      }
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::AnchorNotInAutomaton,
                "'" + *clause.afterAnchor + "' in '" + clause.spelling() +
                    "' does not occur in ORDER",
                clause.pos);
  }
  return out;
}

}  // namespace

PredicateGenMap annotatePredicates(
    const Nfa& nfa, const std::vector<PredicateClause>& ensures,
    const std::vector<PredicateClause>& negates,
    const std::map<std::string, std::vector<EventId>>& labelEvents) {
  PredicateGenMap map(nfa.stateCount());
  std::vector<StateSet> negated(negates.size());
  for (std::size_t q = 0; q < negates.size(); ++q) {
    negated[q] = selectStates(nfa, negates[q], labelEvents);
    for (StateId s : negated[q]) map.add(s, {q, Polarity::Negate});
  }
  for (std::size_t p = 0; p < ensures.size(); ++p) {
    StateSet blocked;
    for (std::size_t q = 0; q < negates.size(); ++q) {
      if (negationMatches(negates[q], ensures[p])) {
        blocked.insert(negated[q].begin(), negated[q].end());
      }
    }
    // Selected states and everything transitively following them, without
    // passing through a state that negates the same predicate.
    StateSet reached;
    std::vector<StateId> work;
    for (StateId s : selectStates(nfa, ensures[p], labelEvents)) {
      if (!blocked.count(s) && reached.insert(s).second) work.push_back(s);
    }
    while (!work.empty()) {
      StateId s = work.back();
      work.pop_back();
      for (const auto& [ev, targets] : nfa.transitionsFrom(s)) {
        for (StateId t : targets) {
          if (!blocked.count(t) && reached.insert(t).second) work.push_back(t);
        }
      }
    }
    for (StateId s : reached) map.add(s, {p, Polarity::Ensure});
  }
  return map;
}

CompiledRule compileRule(const frontend::ResolvedRule& rule) {
  CompiledRule out;
  const auto& ast = rule.ast;
  out.specType = ast.specType;
  out.file = ast.file;
  out.eventTable = ast.events;
  out.varTypes = rule.varTypes;
  out.order = ast.order;
  for (const auto& [label, indices] : rule.labelEvents) {
    auto& ids = out.labelEvents[label];
    for (auto i : indices) ids.push_back(static_cast<EventId>(i));
  }
  out.constraints = ast.constraints;
  out.requirements = ast.requirements;
  out.ensures = ast.ensures;
  out.negates = ast.negates;
  for (const auto& f : ast.forbidden) {
    out.forbiddenIndex.push_back({f.methodName, f.paramTypes, f.replacement, f.pos});
  }
  out.nfa = compileOrder(ast.order, out.labelEvents);
  try {
    out.genMap = annotatePredicates(out.nfa, out.ensures, out.negates,
                                    out.labelEvents);
  } catch (const Error& e) {
    throw e.withFile(ast.file);
  }
  return out;
}

const CompiledRule* CompiledRuleSet::find(const std::string& specType) const {
  for (const auto& r : rules) {
    if (r.specType == specType) return &r;
  }
  return nullptr;
}

CompiledRuleSet compileRuleset(const frontend::Ruleset& ruleset) {
  CompiledRuleSet out;
  out.types = ruleset.types;
  out.fingerprint = ruleset.fingerprint;
  std::vector<Error> errors;
  for (const auto& rule : ruleset.rules) {
    try {
      out.rules.push_back(compileRule(rule));
    } catch (const Error& e) {
      errors.push_back(e);
    }
  }
  if (!errors.empty()) throw ErrorList(std::move(errors));
  return out;
}

std::string toDot(const CompiledRule& rule) {
  std::ostringstream out;
  out << "digraph \"" << rule.specType << "\" {\n  rankdir=LR;\n";
  for (StateId s = 0; s < rule.nfa.stateCount(); ++s) {
    out << "  s" << s << " [label=\"state " << s << "\", shape="
        << (rule.nfa.isAccepting(s) ? "doublecircle" : "circle") << "];\n";
  }
  out << "  start [shape=point];\n  start -> s" << rule.nfa.initial() << ";\n";
  for (StateId s = 0; s < rule.nfa.stateCount(); ++s) {
    for (const auto& [ev, targets] : rule.nfa.transitionsFrom(s)) {
      for (StateId t : targets) {
        out << "  s" << s << " -> s" << t << " [label=\"" << rule.label(ev)
            << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string simpleName(const std::string& qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

}  // namespace crysl::compile
