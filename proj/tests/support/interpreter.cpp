#include "interpreter.hpp"

#include <stdexcept>

#include "crysl/frontend/type_registry.hpp"
#include "crysl/semantics/evaluate.hpp"

namespace crysl::testing {

using minij::CallExpr;
using minij::Function;
using minij::Operand;
using minij::Stmt;
using semantics::Event;
using semantics::RuntimeValue;

namespace {

constexpr long long kOpaqueInt = -424242;
constexpr const char* kOpaqueString = "<opaque>";

struct Outcome {
  std::vector<Event> events;
  std::map<std::string, SourcePos> sites;
  int nextObject = 0;
  std::map<std::string, RuntimeValue> vars;
  bool returned = false;
  RuntimeValue result;
};

class Interpreter {
 public:
  Interpreter(const minij::Program& program, const compile::CompiledRuleSet& rules,
              std::size_t maxPaths)
      : program_(program), rules_(rules), maxPaths_(maxPaths) {}

  std::vector<PathRun> run() {
    std::vector<PathRun> out;
    for (auto& o : block(program_.main(), program_.main().body, {Outcome{}})) {
      PathRun r;
      r.trace.events = std::move(o.events);
      r.sites = std::move(o.sites);
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  std::vector<Outcome> block(const Function& fn, const std::vector<Stmt>& body,
                             std::vector<Outcome> current) {
    for (const auto& s : body) {
      std::vector<Outcome> next;
      for (auto& o : current) {
        if (o.returned) {
          next.push_back(std::move(o));
          continue;
        }
        for (auto& r : stmt(fn, s, std::move(o))) next.push_back(std::move(r));
      }
      if (next.size() > maxPaths_) throw std::runtime_error("too many paths");
      current = std::move(next);
    }
    return current;
  }

  std::vector<Outcome> stmt(const Function& fn, const Stmt& s, Outcome o) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign: {
        std::string type = fn.varTypes.at(s.var);
        std::vector<Outcome> out;
        for (auto& r : rvalue(fn, s, type, std::move(o))) {
          r.vars[s.var] = r.result;
          out.push_back(std::move(r));
        }
        return out;
      }
      case Stmt::Kind::Call:
        return call(fn, s.call, "", s.pos, std::move(o));
      case Stmt::Kind::If: {
        auto out = block(fn, s.body, {o});
        auto other = block(fn, s.elseBody, {std::move(o)});
        for (auto& r : other) out.push_back(std::move(r));
        return out;
      }
      case Stmt::Kind::While:
        throw std::runtime_error("loops are not interpreted");
      case Stmt::Kind::Return:
        o.returned = true;
        o.result = s.returned ? operand(fn, *s.returned, o) : RuntimeValue::unknown();
        return {std::move(o)};
    }
    return {};
  }

  std::vector<Outcome> rvalue(const Function& fn, const Stmt& s, const std::string& type,
                              Outcome o) {
    const auto& v = s.value;
    switch (v.kind) {
      case minij::RValue::Kind::Operand:
        o.result = operand(fn, v.operand, o);
        return {std::move(o)};
      case minij::RValue::Kind::New: {
        const auto& t = v.newExpr.type;
        RuntimeValue obj = freshObject(t, s.pos, o);
        if (const auto* rule = rules_.find(t)) {
          emit(fn, *rule, obj, compile::simpleName(t), v.newExpr.args, std::nullopt, false, s.pos,
               o);
        }
        o.result = obj;
        return {std::move(o)};
      }
      case minij::RValue::Kind::Call:
        return call(fn, v.call, type, s.pos, std::move(o));
    }
    return {};
  }

  std::vector<Outcome> call(const Function& fn, const CallExpr& c, const std::string& resultType,
                            SourcePos pos, Outcome o) {
    if (c.kind == CallExpr::Kind::User) {
      const Function* callee = program_.find(c.method);
      if (depth_ > 32) throw std::runtime_error("call depth exceeded");
      std::map<std::string, RuntimeValue> locals;
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        locals[callee->params[i].name] = operand(fn, c.args[i], o);
      }
      auto saved = o.vars;
      o.vars = std::move(locals);
      ++depth_;
      auto outs = block(*callee, callee->body, {std::move(o)});
      --depth_;
      for (auto& r : outs) {
        if (!r.returned) r.result = RuntimeValue::unknown();
        r.returned = false;
        r.vars = saved;
      }
      return outs;
    }

    RuntimeValue result = opaque(resultType, o);
    if (c.kind == CallExpr::Kind::Static) {
      const auto* rule = rules_.find(c.type);
      if (rule && resultType == c.type) {
        result = freshObject(c.type, pos, o);
        emit(fn, *rule, result, c.method, c.args, std::nullopt, true, pos, o);
      } else if (!resultType.empty() && rules_.find(resultType)) {
        result = freshObject(resultType, pos, o);
      }
    } else {
      const RuntimeValue& recv = o.vars.at(c.receiver);
      if (recv.isObject()) {
        if (const auto* rule = rules_.find(recv.type())) {
          emit(fn, *rule, recv, c.method, c.args, result, false, pos, o);
        }
      }
    }
    o.result = result;
    return {std::move(o)};
  }

  void emit(const Function& fn, const compile::CompiledRule& rule, const RuntimeValue& base,
            const std::string& method, const std::vector<Operand>& args,
            const std::optional<RuntimeValue>& result, bool factory, SourcePos pos, Outcome& o) {
    Event ev;
    ev.typeName = rule.specType;
    ev.sig.name = method;
    ev.staticFactory = factory;
    ev.line = pos.line;
    std::vector<RuntimeValue> values;
    for (const auto& a : args) {
      ev.sig.paramTypes.push_back(staticType(fn, a));
      values.push_back(operand(fn, a, o));
    }
    ev.env[semantics::kThisVar] = base;
    for (auto id : rule.matchEvents(method, ev.sig.paramTypes, rules_.types)) {
      const auto& decl = rule.eventTable[id];
      for (std::size_t i = 0; i < decl.params.size(); ++i) {
        const auto& p = decl.params[i];
        if (p != frontend::kWildcard && p != frontend::kThis) ev.env[p] = values[i];
      }
      if (decl.returnBinding && *decl.returnBinding != frontend::kWildcard) {
        ev.env[*decl.returnBinding] = result.value_or(RuntimeValue::unknown());
      }
    }
    o.events.push_back(std::move(ev));
  }

  static std::string staticType(const Function& fn, const Operand& a) {
    switch (a.kind) {
      case Operand::Kind::Var: return fn.varTypes.at(a.text);
      case Operand::Kind::String: return "java.lang.String";
      case Operand::Kind::Int: return "int";
    }
    return {};
  }

  static RuntimeValue operand(const Function&, const Operand& a, const Outcome& o) {
    switch (a.kind) {
      case Operand::Kind::Var: return o.vars.at(a.text);
      case Operand::Kind::String: return RuntimeValue::ofString(a.text);
      case Operand::Kind::Int: return RuntimeValue::ofInt(a.integer);
    }
    return {};
  }

  static RuntimeValue freshObject(const std::string& type, SourcePos pos, Outcome& o) {
    std::string id = "o" + std::to_string(o.nextObject++);
    o.sites[id] = pos;
    return RuntimeValue::ofObject(id, type);
  }

  // Result of a call the interpreter cannot see into. Objects get no type
  // so that calls on them are not recorded.
  static RuntimeValue opaque(const std::string& type, Outcome& o) {
    if (type.empty()) return RuntimeValue::unknown();
    switch (frontend::TypeRegistry::kindOf(type)) {
      case frontend::ValueKind::String: return RuntimeValue::ofString(kOpaqueString);
      case frontend::ValueKind::Integer:
      case frontend::ValueKind::Boolean: return RuntimeValue::ofInt(kOpaqueInt);
      case frontend::ValueKind::Other: break;
    }
    if (frontend::TypeRegistry::isPrimitive(type)) return RuntimeValue::ofInt(kOpaqueInt);
    return RuntimeValue::ofObject("u" + std::to_string(o.nextObject++));
  }

  const minij::Program& program_;
  const compile::CompiledRuleSet& rules_;
  std::size_t maxPaths_;
  int depth_ = 0;
};

}  // namespace

std::vector<PathRun> enumeratePaths(const minij::Program& program,
                                    const compile::CompiledRuleSet& rules,
                                    std::size_t maxPaths) {
  return Interpreter(program, rules, maxPaths).run();
}

std::string toString(const Violation& v) {
  return std::string(analysis::toString(v.category)) + " " + std::to_string(v.line);
}

std::set<Violation> dynamicViolations(const PathRun& run, const compile::CompiledRuleSet& rules) {
  using analysis::Category;
  auto verdict = semantics::evaluateTrace(run.trace, rules);
  auto siteLine = [&](const RuntimeValue& base) { return run.sites.at(base.objectId()).line; };
  std::set<Violation> out;
  for (const auto& o : verdict.objects) {
    if (!o.forbiddenOk) {
      out.insert({Category::ForbiddenMethod, run.trace.events.at(*o.forbiddenAt).line});
    }
    if (!o.orderOk) out.insert({Category::OrderError, siteLine(o.base)});
    if (!o.constraintsOk) out.insert({Category::ConstraintViolation, siteLine(o.base)});
  }
  for (const auto& u : verdict.unsatisfied) {
    out.insert({Category::UnsatisfiedPredicate, siteLine(u.base)});
  }
  return out;
}

std::set<Violation> staticViolations(const std::vector<analysis::Finding>& findings) {
  std::set<Violation> out;
  for (const auto& f : findings) {
    bool byCall = f.category == analysis::Category::ForbiddenMethod || !f.site;
    out.insert({f.category, byCall ? f.pos.line : f.sitePos.line});
  }
  return out;
}

}  // namespace crysl::testing
