#include "crysl/analysis/analyze.hpp"

#include <algorithm>

#include "crysl/fingerprint.hpp"
#include "crysl/semantics/sat.hpp"

namespace crysl::analysis {

using frontend::ConstraintExpr;
using frontend::PredicateClause;
using minij::CallExpr;
using minij::Node;
using Clock = std::chrono::steady_clock;

namespace {

std::string joinValues(const std::set<RuntimeValue>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    out += v.spelling();
  }
  return out;
}

const std::vector<minij::Operand>& eventArgs(const Node& n) {
  return n.kind == Node::Kind::New ? n.newExpr.args : n.call.args;
}

ValueSet applyFunction(const std::optional<std::string>& fn, const ValueSet& in) {
  if (!fn) return in;
  ValueSet out;
  out.complete = in.complete;
  for (const auto& v : in.values) {
    try {
      out.values.insert(semantics::applyFunction(fn, v));
    } catch (const Error&) {
      out.values.insert(v);
    }
  }
  return out;
}

bool listed(const RuntimeValue& v, const std::vector<frontend::Constant>& list) {
  return std::ranges::any_of(list, [&](const frontend::Constant& c) {
    if (c.kind == frontend::Constant::Kind::String) return v.isString() && v.text() == c.text;
    return v.isInt() && v.integer() == c.integer;
  });
}

Finding siteFinding(Category category, const minij::ProgramIr& ir, const SiteTypestate& ts,
                    NodeId at) {
  Finding f;
  f.category = category;
  f.file = ir.program->file;
  f.pos = ir.node(at).pos;
  f.site = ts.site.node;
  f.sitePos = ir.node(ts.site.node).pos;
  f.ruleType = ts.site.rule->specType;
  return f;
}

class ConstraintChecker {
 public:
  explicit ConstraintChecker(const Bindings& bindings) : bindings_(bindings) {}

  bool relevant(const ConstraintExpr& c) const {
    return std::ranges::all_of(c.variables(), [&](const std::string& v) {
      return bindings_.count(v) > 0;
    });
  }

  bool mayHold(const ConstraintExpr& c) const {
    if (c.kind == ConstraintExpr::Kind::Implication) return true;
    for (const auto& [node, values] : bindings_.at(c.subject.var)) {
      for (const auto& v : applyFunction(c.subject.function, values).known()) {
        if (listed(v, c.values)) return true;
      }
    }
    return false;
  }

  struct Violation {
    NodeId node;
    std::string variable;
    std::set<RuntimeValue> offending;
    bool undetermined;
  };

  void violations(const ConstraintExpr& c, std::vector<Violation>& out) const {
    if (c.kind == ConstraintExpr::Kind::Implication) {
      if (mayHold(c.lhs())) violations(c.rhs(), out);
      return;
    }
    for (const auto& [node, raw] : bindings_.at(c.subject.var)) {
      ValueSet values = applyFunction(c.subject.function, raw);
      std::set<RuntimeValue> offending;
      for (const auto& v : values.known()) {
        if (!listed(v, c.values)) offending.insert(v);
      }
      if (!offending.empty() || !values.complete) {
        out.push_back({node, c.subject.spelling(), offending, !values.complete});
      }
    }
  }

 private:
  const Bindings& bindings_;
};

}  // namespace

bool isExcluded(const std::string& function, const AnalysisConfig& config) {
  return std::ranges::any_of(config.excludePrefixes, [&](const std::string& p) {
    return function.starts_with(p);
  });
}

std::vector<Finding> scanForbidden(const minij::ProgramIr& ir, const minij::CallGraph& cg,
                                   const compile::CompiledRuleSet& rules,
                                   const AnalysisConfig& config) {
  std::vector<Finding> out;
  for (NodeId id = 0; id < static_cast<NodeId>(ir.nodes.size()); ++id) {
    const Node& n = ir.node(id);
    if (!cg.reachable.count(n.function) || isExcluded(ir.functionOf(id).name, config)) {
      continue;
    }
    std::string type;
    std::string method;
    if (n.kind == Node::Kind::New) {
      type = n.newExpr.type;
      method = compile::simpleName(type);
    } else if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::Instance) {
      type = ir.functionOf(id).typeOf(n.call.receiver);
      method = n.call.method;
    } else if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::Static) {
      type = n.call.type;
      method = n.call.method;
    } else {
      continue;
    }
    const auto* rule = rules.find(type);
    if (!rule) continue;
    const auto* entry = rule->matchForbidden(method, ir.argTypes(id, eventArgs(n)));
    if (!entry) continue;
    Finding f;
    f.category = Category::ForbiddenMethod;
    f.file = ir.program->file;
    f.pos = n.pos;
    f.ruleType = rule->specType;
    f.message = "call to forbidden method " + entry->signature();
    f.details["signature"] = entry->signature();
    if (entry->replacement) {
      f.message += "; use " + *entry->replacement + " instead";
      f.details["replacement"] = *entry->replacement;
    }
    out.push_back(std::move(f));
  }
  return out;
}

Bindings siteBindings(const SiteTypestate& ts, const minij::ProgramIr& ir,
                      ValueExtractor& values) {
  Bindings out;
  const auto& rule = *ts.site.rule;
  for (const auto& [id, matched] : ts.events) {
    const Node& n = ir.node(id);
    const auto& args = eventArgs(n);
    for (EventId e : matched) {
      const auto& decl = rule.eventTable.at(e);
      for (std::size_t i = 0; i < decl.params.size() && i < args.size(); ++i) {
        const auto& p = decl.params[i];
        if (p == frontend::kWildcard || p == frontend::kThis) continue;
        out[p][id].merge(values.valueOf(id, args[i]));
      }
      if (decl.returnBinding && *decl.returnBinding != frontend::kWildcard) {
        ValueSet v;
        if (n.result.empty()) {
          v.add(RuntimeValue::unknown());
        } else {
          v = values.definedBy(id);
        }
        out[*decl.returnBinding][id].merge(v);
      }
    }
  }
  return out;
}

std::vector<Finding> solveConstraints(const SiteTypestate& ts, const minij::ProgramIr& ir,
                                      ValueExtractor& values) {
  Bindings bindings = siteBindings(ts, ir, values);
  ConstraintChecker checker(bindings);
  std::vector<Finding> out;
  for (const auto& c : ts.site.rule->constraints) {
    if (!checker.relevant(c)) continue;
    std::vector<ConstraintChecker::Violation> found;
    checker.violations(c, found);
    std::set<NodeId> reported;
    for (const auto& v : found) {
      if (!reported.insert(v.node).second) continue;
      Finding f = siteFinding(Category::ConstraintViolation, ir, ts, v.node);
      std::string what = joinValues(v.offending);
      if (v.undetermined) {
        what += (what.empty() ? "" : " and ") + std::string("a value that could not be determined");
      }
      f.message = "constraint " + c.spelling() + " violated by " + v.variable + " = " + what;
      f.details["constraint"] = c.spelling();
      f.details["variable"] = v.variable;
      f.details["values"] = joinValues(v.offending);
      if (v.undetermined) f.details["undetermined"] = "true";
      out.push_back(std::move(f));
    }
  }
  return out;
}

namespace {

using Args = std::vector<std::optional<ValueSet>>;

class PredicateSolver {
 public:
  PredicateSolver(const std::vector<SiteAnalysis>& sites, const minij::ProgramIr& ir)
      : sites_(sites), ir_(ir) {
    for (std::size_t s = 0; s < sites.size(); ++s) {
      const auto& ts = sites[s].typestate;
      bool ok = !ts.timedOut && ts.forbiddenCalls.empty() && ts.orderErrors.empty() &&
                sites[s].constraintFindings.empty();
      if (ok) candidates_.push_back(s);
      const auto& rule = *ts.site.rule;
      std::vector<Args> provided;
      for (const auto& clause : rule.ensures) {
        provided.push_back(argsOf(s, clause, std::nullopt));
      }
      provides_.push_back(std::move(provided));
    }
  }

  PredicateResolution solve() {
    PredicateResolution res;
    std::set<std::size_t> ensuring;
    while (true) {
      ++res.iterations;
      std::set<std::size_t> next;
      for (auto s : candidates_) {
        if (!firstFailures(s, ensuring).empty()) continue;
        next.insert(s);
      }
      if (next == ensuring) break;
      ensuring = std::move(next);
    }
    for (auto s : ensuring) res.ensuringSites.insert(sites_[s].typestate.site.node);

    for (std::size_t s = 0; s < sites_.size(); ++s) {
      const auto& ts = sites_[s].typestate;
      const auto& rule = *ts.site.rule;
      for (const auto& [r, at] : firstFailures(s, ensuring)) {
        const auto& clause = rule.requirements[r];
        Finding f = siteFinding(Category::UnsatisfiedPredicate, ir_, ts, at);
        f.message = "required predicate " + clause.spelling() + " is not ensured";
        f.details["predicate"] = clause.spelling();
        res.findings.push_back(std::move(f));
      }
    }

    for (auto s : ensuring) {
      const auto& ts = sites_[s].typestate;
      const auto& rule = *ts.site.rule;
      for (std::size_t p = 0; p < rule.ensures.size(); ++p) {
        auto gen = rule.genMap.generatingStates(p);
        for (const auto& [node, sets] : ts.statesIn) {
          bool may = std::ranges::any_of(sets, [&](const StateSet& states) {
            return intersects(states, gen);
          });
          if (may) {
            res.ensuredAt[node].push_back(
                {ts.site.node, p, rule.ensures[p].name, provides_[s][p]});
          }
        }
      }
    }
    return res;
  }

 private:
  static bool intersects(const StateSet& a, const StateSet& b) {
    return std::ranges::any_of(a, [&](compile::StateId s) { return b.count(s) > 0; });
  }

  // Argument values of a clause for site s; at a checkpoint, a variable
  // bound there takes the values bound there.
  Args argsOf(std::size_t s, const PredicateClause& clause, std::optional<NodeId> at) const {
    const auto& bindings = sites_[s].bindings;
    Args out;
    for (const auto& arg : clause.args) {
      if (arg.isThis()) {
        ValueSet self;
        self.add(objectAt(sites_[s].typestate.site.node));
        out.push_back(self);
        continue;
      }
      auto it = bindings.find(arg.var);
      if (arg.isWildcard() || it == bindings.end()) {
        out.push_back(std::nullopt);
        continue;
      }
      ValueSet values;
      if (at && it->second.count(*at)) {
        values = it->second.at(*at);
      } else {
        for (const auto& [node, v] : it->second) values.merge(v);
      }
      out.push_back(applyFunction(arg.function, values));
    }
    return out;
  }

  static bool mustMatch(const Args& required, const Args& provided) {
    if (required.size() != provided.size()) return false;
    for (std::size_t i = 0; i < required.size(); ++i) {
      const auto& r = required[i];
      const auto& p = provided[i];
      if (!r || !p) continue;
      if (!r->complete || !p->complete || r->values.size() != 1 || r->values != p->values) {
        return false;
      }
    }
    return true;
  }

  // Every path reaching `at` has allocated site s and left it in a state
  // generating ENSURES clause p.
  bool mustHold(std::size_t s, std::size_t p, NodeId at) const {
    const auto& ts = sites_[s].typestate;
    if (ts.maybeAbsent.count(at)) return false;
    auto it = ts.statesIn.find(at);
    if (it == ts.statesIn.end() || it->second.empty()) return false;
    auto gen = ts.site.rule->genMap.generatingStates(p);
    return std::ranges::all_of(it->second, [&](const StateSet& states) {
      return intersects(states, gen);
    });
  }

  bool satisfied(std::size_t s, const PredicateClause& clause, NodeId at,
                 const std::set<std::size_t>& ensuring) const {
    Args required = argsOf(s, clause, at);
    for (auto t : ensuring) {
      const auto& rule = *sites_[t].typestate.site.rule;
      for (std::size_t p = 0; p < rule.ensures.size(); ++p) {
        const auto& e = rule.ensures[p];
        if (e.name != clause.name || e.args.size() != clause.args.size()) continue;
        if (mustMatch(required, provides_[t][p]) && mustHold(t, p, at)) return true;
      }
    }
    return false;
  }

  std::vector<NodeId> checkpoints(std::size_t s, const PredicateClause& clause) const {
    const auto& ts = sites_[s].typestate;
    const auto& rule = *ts.site.rule;
    auto vars = rule.relevantVariables(clause);
    std::vector<NodeId> out;
    for (const auto& [node, matched] : ts.events) {
      bool binds = vars.empty();
      for (EventId e : matched) {
        for (const auto& v : rule.boundVariables(e)) binds = binds || vars.count(v) > 0;
      }
      if (binds) out.push_back(node);
    }
    if (vars.empty() && ts.events.count(ts.site.node)) out = {ts.site.node};
    std::ranges::sort(out, [&](NodeId a, NodeId b) {
      return std::make_pair(ir_.node(a).pos, a) < std::make_pair(ir_.node(b).pos, b);
    });
    return out;
  }

  // REQUIRES clause index -> first statement where it is not met.
  std::map<std::size_t, NodeId> firstFailures(std::size_t s,
                                              const std::set<std::size_t>& ensuring) const {
    std::map<std::size_t, NodeId> out;
    const auto& rule = *sites_[s].typestate.site.rule;
    if (sites_[s].typestate.timedOut) return out;
    for (std::size_t r = 0; r < rule.requirements.size(); ++r) {
      for (NodeId at : checkpoints(s, rule.requirements[r])) {
        if (!satisfied(s, rule.requirements[r], at, ensuring)) {
          out.emplace(r, at);
          break;
        }
      }
    }
    return out;
  }

  const std::vector<SiteAnalysis>& sites_;
  const minij::ProgramIr& ir_;
  std::vector<std::size_t> candidates_;
  std::vector<std::vector<Args>> provides_;
};

}  // namespace

PredicateResolution resolvePredicates(const std::vector<SiteAnalysis>& sites,
                                      const minij::ProgramIr& ir) {
  return PredicateSolver(sites, ir).solve();
}

std::size_t AnalysisReport::count(Category c) const {
  return std::ranges::count_if(findings, [&](const Finding& f) { return f.category == c; });
}

AnalysisReport analyzeProgram(const minij::Program& program,
                              const compile::CompiledRuleSet& rules,
                              const AnalysisConfig& config) {
  AnalysisReport report;
  report.programFile = program.file;
  report.programFingerprint = fingerprint(program.source);
  report.rulesetFingerprint = rules.fingerprint;

  auto mark = Clock::now();
  auto lap = [&](std::chrono::microseconds& slot) {
    auto now = Clock::now();
    slot = std::chrono::duration_cast<std::chrono::microseconds>(now - mark);
    mark = now;
  };

  minij::ProgramIr ir = minij::buildCfg(program);
  minij::Liveness live = minij::computeLiveness(ir);
  minij::CallGraph cg = minij::buildCallGraph(ir);
  std::vector<minij::AllocationSite> sites;
  for (const auto& site : minij::findAllocationSites(ir, cg, rules)) {
    if (!isExcluded(ir.functionOf(site.node).name, config)) sites.push_back(site);
  }
  std::vector<Finding> findings = scanForbidden(ir, cg, rules, config);
  lap(report.timings.callGraph);

  std::vector<SiteAnalysis> analyses;
  for (const auto& site : sites) {
    SiteAnalysis a;
    a.typestate = runTypestate(ir, live, cg, site, rules.types, Clock::now() + config.budget);
    if (a.typestate.timedOut) {
      report.skipped.push_back({site.node, ir.node(site.node).pos, site.type,
                                "analysis budget exceeded"});
    }
    analyses.push_back(std::move(a));
  }
  lap(report.timings.typestate);

  ValueExtractor values(ir, cg);
  for (auto& a : analyses) {
    if (a.typestate.timedOut) continue;
    a.bindings = siteBindings(a.typestate, ir, values);
    a.constraintFindings = solveConstraints(a.typestate, ir, values);
  }
  lap(report.timings.constraints);

  PredicateResolution preds = resolvePredicates(analyses, ir);
  lap(report.timings.predicates);

  for (const auto& a : analyses) {
    if (a.typestate.timedOut) continue;
    findings.insert(findings.end(), a.typestate.orderErrors.begin(), a.typestate.orderErrors.end());
    findings.insert(findings.end(), a.constraintFindings.begin(), a.constraintFindings.end());
  }
  findings.insert(findings.end(), preds.findings.begin(), preds.findings.end());
  sortFindings(findings);
  report.findings = std::move(findings);
  return report;
}

}  // namespace crysl::analysis
