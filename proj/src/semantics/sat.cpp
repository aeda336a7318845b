#include "crysl/semantics/sat.hpp"

#include <algorithm>

namespace crysl::semantics {

using compile::EventId;
using compile::StateSet;
using frontend::ConstraintExpr;

std::vector<ObjectTrace> projectObjectTraces(
    const RuntimeTrace& trace, const compile::CompiledRuleSet& rules) {
  std::vector<ObjectTrace> out;
  std::map<std::string, std::size_t> byId;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& ev = trace.events[i];
    const RuntimeValue* base = ev.base();
    if (!base) continue;
    const auto* rule = rules.find(base->type());
    if (!rule) continue;
    auto matched = rule->matchEvents(ev.sig.name, ev.sig.paramTypes, rules.types);
    const auto* forbidden = rule->matchForbidden(ev.sig.name, ev.sig.paramTypes);
    if (matched.empty() && !forbidden) continue;
    auto [it, fresh] = byId.emplace(base->objectId(), out.size());
    if (fresh) {
      out.emplace_back();
      out.back().base = *base;
      out.back().rule = rule;
    }
    ObjectTrace& ot = out[it->second];
    ot.indices.push_back(i);
    ot.events.push_back(ev);
    ot.matched.push_back(forbidden ? std::set<EventId>{} : matched);
    ot.forbidden.push_back(forbidden);
  }
  return out;
}

std::optional<std::size_t> firstForbidden(const ObjectTrace& ot) {
  for (std::size_t k = 0; k < ot.size(); ++k) {
    if (ot.forbidden[k]) return k;
  }
  return std::nullopt;
}

bool satForbidden(const ObjectTrace& ot) { return !firstForbidden(ot); }

OrderRun runOrder(const ObjectTrace& ot) {
  const auto& nfa = ot.rule->nfa;
  const auto alphabet = nfa.alphabet();
  OrderRun run;
  StateSet current = nfa.initialSet();
  for (std::size_t k = 0; k < ot.size(); ++k) {
    std::set<EventId> events;
    std::ranges::set_intersection(ot.matched[k], alphabet,
                                  std::inserter(events, events.end()));
    bool step = !events.empty();
    if (step && !current.empty()) {
      current = nfa.step(current, events);
      if (current.empty()) run.rejectedAt = k;
    }
    run.after.push_back(current);
    run.stepped.push_back(step);
  }
  run.accepted = !run.rejectedAt && nfa.anyAccepting(current);
  return run;
}

bool satOrder(const ObjectTrace& ot) { return runOrder(ot).accepted; }

std::string alg(const std::string& transformation) {
  return transformation.substr(0, transformation.find('/'));
}

RuntimeValue applyFunction(const std::optional<std::string>& function,
                           const RuntimeValue& value) {
  if (!function || value.isUnknown()) return value;
  if (*function == "alg") {
    if (!value.isString()) {
      throw Error(ErrorKind::Kind, "alg() applied to " + value.spelling());
    }
    return RuntimeValue::ofString(alg(value.text()));
  }
  throw Error(ErrorKind::UnknownFunction, "unknown function '" + *function + "'");
}

Env accumulatedEnv(const ObjectTrace& ot, std::size_t k) {
  Env env;
  for (std::size_t j = 0; j <= k && j < ot.size(); ++j) {
    if (ot.matched[j].empty()) continue;
    for (const auto& [var, value] : ot.events[j].env) env[var] = value;
  }
  return env;
}

namespace {

enum class Truth { True, False, Unbound };

bool equalsConstant(const RuntimeValue& v, const frontend::Constant& c) {
  using K = frontend::Constant::Kind;
  if (c.kind == K::String && v.isString()) return v.text() == c.text;
  if (c.kind == K::Integer && v.isInt()) return v.integer() == c.integer;
  throw Error(ErrorKind::Kind, "value " + v.spelling() +
                                   " compared with constant " + c.spelling());
}

Truth evaluate(const ConstraintExpr& c, const Env& env) {
  if (c.kind == ConstraintExpr::Kind::Implication) {
    if (evaluate(c.lhs(), env) != Truth::True) return Truth::True;
    return evaluate(c.rhs(), env) == Truth::False ? Truth::False : Truth::True;
  }
  auto it = env.find(c.subject.var);
  if (it == env.end() || it->second.isUnknown()) return Truth::Unbound;
  RuntimeValue v = applyFunction(c.subject.function, it->second);
  bool in = std::ranges::any_of(
      c.values, [&](const auto& k) { return equalsConstant(v, k); });
  return in ? Truth::True : Truth::False;
}

}  // namespace

bool holds(const ConstraintExpr& c, const Env& env) {
  return evaluate(c, env) != Truth::False;
}

std::optional<ConstraintFailure> firstConstraintFailure(const ObjectTrace& ot) {
  Env env;
  for (std::size_t k = 0; k < ot.size(); ++k) {
    if (ot.matched[k].empty()) continue;
    for (const auto& [var, value] : ot.events[k].env) env[var] = value;
    for (std::size_t c = 0; c < ot.rule->constraints.size(); ++c) {
      if (!holds(ot.rule->constraints[c], env)) return ConstraintFailure{k, c};
    }
  }
  return std::nullopt;
}

bool satConstraints(const ObjectTrace& ot) { return !firstConstraintFailure(ot); }

bool sat(const ObjectTrace& ot) {
  return satForbidden(ot) && satOrder(ot) && satConstraints(ot);
}

}  // namespace crysl::semantics
