#include "crysl/semantics/evaluate.hpp"

#include <algorithm>
#include <map>

namespace crysl::semantics {

using compile::Polarity;
using frontend::PredicateClause;

bool TraceVerdict::ok() const {
  return unsatisfied.empty() &&
         std::ranges::all_of(objects, [](const auto& o) { return o.sat(); });
}

bool argsMatch(const PredicateArgs& a, const PredicateArgs& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i] && *a[i] != *b[i]) return false;
  }
  return true;
}

bool TraceVerdict::available(const std::string& name, const PredicateArgs& args,
                             std::size_t at) const {
  return std::ranges::any_of(pool, [&](const PredicateInstance& p) {
    return p.name == name && p.visibleAt(at) && argsMatch(p.args, args);
  });
}

namespace {

PredicateArgs bindArgs(const PredicateClause& clause, const RuntimeValue& base,
                       const Env& env) {
  PredicateArgs out;
  for (const auto& arg : clause.args) {
    if (arg.isThis()) {
      out.push_back(base);
    } else if (auto it = env.find(arg.var);
               !arg.isWildcard() && it != env.end() && !it->second.isUnknown()) {
      out.push_back(applyFunction(arg.function, it->second));
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

// Per object: precomputed single-trace facts plus replay progress.
struct ObjectState {
  const ObjectTrace* ot;
  OrderRun run;
  std::optional<std::size_t> forbiddenAt;   // object-trace positions
  std::optional<std::size_t> constraintAt;
  std::vector<std::set<std::string>> relevant;  // per REQUIRES clause
  std::vector<bool> checked;
  std::vector<bool> failed;
};

bool isCheckpoint(const ObjectState& st, std::size_t clause, std::size_t k) {
  if (st.ot->matched[k].empty()) return false;
  const auto& vars = st.relevant[clause];
  if (vars.empty()) return k == 0;
  const auto& env = st.ot->events[k].env;
  return std::ranges::any_of(vars, [&](const auto& v) { return env.count(v) > 0; });
}

}  // namespace

TraceVerdict evaluateTrace(const RuntimeTrace& trace,
                           const compile::CompiledRuleSet& rules) {
  TraceVerdict verdict;
  const auto traces = projectObjectTraces(trace, rules);

  std::vector<ObjectState> states;
  // trace position -> (object, position within its object trace)
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> owner;
  for (std::size_t o = 0; o < traces.size(); ++o) {
    const ObjectTrace& ot = traces[o];
    const auto& rule = *ot.rule;
    ObjectState st{&ot, runOrder(ot), firstForbidden(ot), {}, {}, {}, {}};
    ObjectVerdict v;
    v.base = ot.base;
    v.specType = rule.specType;
    v.indices = ot.indices;
    if (st.forbiddenAt) {
      v.forbiddenOk = false;
      v.forbiddenAt = ot.indices[*st.forbiddenAt];
      v.forbiddenSignature = ot.events[*st.forbiddenAt].sig.spelling();
    }
    v.orderOk = st.run.accepted;
    if (st.run.rejectedAt) v.orderRejectedAt = ot.indices[*st.run.rejectedAt];
    if (auto f = firstConstraintFailure(ot)) {
      st.constraintAt = f->event;
      v.constraintsOk = false;
      v.constraintFailedAt = ot.indices[f->event];
      v.failedConstraint = rule.constraints[f->constraint].spelling();
    }
    for (const auto& clause : rule.requirements) {
      st.relevant.push_back(rule.relevantVariables(clause));
    }
    st.checked.assign(rule.requirements.size(), false);
    st.failed.assign(rule.requirements.size(), false);
    verdict.objects.push_back(std::move(v));
    states.push_back(std::move(st));
    for (std::size_t k = 0; k < ot.size(); ++k) owner[ot.indices[k]] = {o, k};
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> firstFailure;
  for (const auto& [i, where] : owner) {
    auto [o, k] = where;
    ObjectState& st = states[o];
    const ObjectTrace& ot = *st.ot;
    const auto& rule = *ot.rule;
    const Env env = accumulatedEnv(ot, k);

    for (std::size_t r = 0; r < rule.requirements.size(); ++r) {
      if (!isCheckpoint(st, r, k)) continue;
      const auto& clause = rule.requirements[r];
      st.checked[r] = true;
      if (!verdict.available(clause.name, bindArgs(clause, ot.base, env), i)) {
        st.failed[r] = true;
        firstFailure.emplace(std::make_pair(o, r), i);
      }
    }

    if (!st.run.stepped[k]) continue;
    const auto& entered = st.run.after[k];
    std::set<std::size_t> negated;
    std::set<std::size_t> generated;
    for (auto s : entered) {
      for (const auto& g : rule.genMap.at(s)) {
        (g.polarity == Polarity::Negate ? negated : generated).insert(g.clause);
      }
    }

    for (auto q : negated) {
      const auto& clause = rule.negates[q];
      PredicateArgs args = bindArgs(clause, ot.base, env);
      for (auto& p : verdict.pool) {
        if (p.name == clause.name && !p.killedAt && argsMatch(p.args, args)) {
          p.killedAt = i;
        }
      }
    }

    bool prefixOk = !(st.forbiddenAt && *st.forbiddenAt <= k) &&
                    !(st.constraintAt && *st.constraintAt <= k);
    for (std::size_t r = 0; r < rule.requirements.size(); ++r) {
      prefixOk = prefixOk && st.checked[r] && !st.failed[r];
    }
    if (!prefixOk) continue;
    for (auto p : generated) {
      const auto& clause = rule.ensures[p];
      PredicateArgs args = bindArgs(clause, ot.base, env);
      bool live = std::ranges::any_of(verdict.pool, [&](const auto& inst) {
        return inst.name == clause.name && !inst.killedAt && inst.args == args;
      });
      if (!live) {
        verdict.pool.push_back({clause.name, args, i, std::nullopt, ot.base,
                                rule.specType});
      }
    }
  }

  for (const auto& [key, at] : firstFailure) {
    auto [o, r] = key;
    const auto& rule = *traces[o].rule;
    verdict.unsatisfied.push_back(
        {traces[o].base, rule.specType, r, rule.requirements[r].spelling(), at});
  }
  std::ranges::stable_sort(verdict.unsatisfied, {}, [](const auto& u) { return u.at; });
  return verdict;
}

}  // namespace crysl::semantics
