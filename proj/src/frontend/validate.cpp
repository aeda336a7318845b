#include "crysl/frontend/validate.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "crysl/fingerprint.hpp"
#include "crysl/frontend/parser.hpp"

namespace crysl::frontend {

bool isAuxiliaryFunction(const std::string& name) { return name == "alg"; }

std::string ResolvedRule::typeOf(const std::string& var) const {
  if (var == kThis) return ast.specType;
  auto it = varTypes.find(var);
  return it == varTypes.end() ? std::string() : it->second;
}

ValueKind ResolvedRule::kindOf(const ValueRef& ref) const {
  if (ref.function) return ValueKind::String;  // alg(...) yields a string
  return TypeRegistry::kindOf(typeOf(ref.var));
}

namespace {

class Validator {
 public:
  Validator(const RuleAst& ast, const TypeRegistry& registry)
      : registry_(registry) {
    rule_.ast = ast;
  }

  ResolvedRule run() {
    checkObjects();
    checkEvents();
    expandAggregates();
    checkForbidden();
    checkOrder(rule_.ast.order);
    for (const auto& c : rule_.ast.constraints) checkConstraint(c);
    for (const auto* list : {&rule_.ast.requirements, &rule_.ast.ensures,
                             &rule_.ast.negates}) {
      for (const auto& clause : *list) checkClause(clause);
    }
    return std::move(rule_);
  }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& message,
                         SourcePos pos) const {
    throw Error(kind, message, pos, rule_.ast.file);
  }

  bool typeKnown(const std::string& type) const {
    return registry_.isKnown(type) || type == rule_.ast.specType;
  }

  void checkObjects() {
    for (const auto& obj : rule_.ast.objects) {
      if (obj.name == kThis || obj.name == kWildcard) {
        fail(ErrorKind::DuplicateDeclaration,
             "object name '" + obj.name + "' is reserved", obj.pos);
      }
      if (!rule_.varTypes.emplace(obj.name, obj.type).second) {
        fail(ErrorKind::DuplicateDeclaration,
             "object '" + obj.name + "' declared twice", obj.pos);
      }
      if (!typeKnown(obj.type)) {
        fail(ErrorKind::UnknownType, "unknown type '" + obj.type + "'",
             obj.pos);
      }
    }
  }

  void checkVariable(const std::string& var, SourcePos pos) const {
    if (var == kWildcard || var == kThis) return;
    if (!rule_.varTypes.count(var)) {
      fail(ErrorKind::UnresolvedVariable,
           "variable '" + var + "' is not declared under OBJECTS", pos);
    }
  }

  void checkEvents() {
    std::set<std::string> names;
    for (std::size_t i = 0; i < rule_.ast.events.size(); ++i) {
      const auto& ev = rule_.ast.events[i];
      if (!names.insert(ev.label).second) {
        fail(ErrorKind::DuplicateDeclaration,
             "label '" + ev.label + "' declared twice", ev.pos);
      }
      for (const auto& p : ev.params) checkVariable(p, ev.pos);
      if (ev.returnBinding) checkVariable(*ev.returnBinding, ev.pos);
      rule_.labelEvents[ev.label] = {i};
    }
    for (const auto& agg : rule_.ast.aggregates) {
      if (!names.insert(agg.name).second) {
        fail(ErrorKind::DuplicateDeclaration,
             "aggregate '" + agg.name + "' clashes with another label",
             agg.pos);
      }
    }
  }

  void expandAggregates() {
    std::map<std::string, const Aggregate*> byName;
    for (const auto& agg : rule_.ast.aggregates) byName[agg.name] = &agg;
    std::set<std::string> inProgress;
    std::function<std::vector<std::size_t>(const Aggregate&)> expand =
        [&](const Aggregate& agg) -> std::vector<std::size_t> {
      if (auto done = rule_.labelEvents.find(agg.name);
          done != rule_.labelEvents.end()) {
        return done->second;
      }
      if (!inProgress.insert(agg.name).second) {
        fail(ErrorKind::UnresolvedLabel,
             "aggregate '" + agg.name + "' refers to itself", agg.pos);
      }
      std::set<std::size_t> members;
      for (const auto& label : agg.labels) {
        if (auto ev = rule_.labelEvents.find(label);
            ev != rule_.labelEvents.end() && !byName.count(label)) {
          members.insert(ev->second.begin(), ev->second.end());
        } else if (auto sub = byName.find(label); sub != byName.end()) {
          auto inner = expand(*sub->second);
          members.insert(inner.begin(), inner.end());
        } else {
          fail(ErrorKind::UnresolvedLabel,
               "aggregate '" + agg.name + "' refers to undeclared label '" +
                   label + "'",
               agg.pos);
        }
      }
      inProgress.erase(agg.name);
      auto& slot = rule_.labelEvents[agg.name];
      slot.assign(members.begin(), members.end());
      return slot;
    };
    for (const auto& agg : rule_.ast.aggregates) expand(agg);
  }

  void checkLabel(const std::string& label, SourcePos pos,
                  const char* context) const {
    if (!rule_.labelEvents.count(label)) {
      fail(ErrorKind::UnresolvedLabel,
           std::string(context) + " refers to undeclared label '" + label +
               "'",
           pos);
    }
  }

  void checkForbidden() {
    for (const auto& f : rule_.ast.forbidden) {
      for (const auto& t : f.paramTypes) {
        if (!typeKnown(t)) {
          fail(ErrorKind::UnknownType, "unknown type '" + t + "'", f.pos);
        }
      }
      if (f.replacement) checkLabel(*f.replacement, f.pos, "replacement");
    }
  }

  void checkOrder(const OrderExpr& e) {
    if (e.kind == OrderExpr::Kind::Ref) {
      checkLabel(e.ref, e.pos, "ORDER");
      return;
    }
    for (const auto& c : e.children) checkOrder(c);
  }

  void checkFunction(const ValueRef& ref, SourcePos pos) const {
    if (!ref.function) return;
    if (!isAuxiliaryFunction(*ref.function)) {
      fail(ErrorKind::UnknownFunction,
           "unknown auxiliary function '" + *ref.function + "'", pos);
    }
    if (ref.isWildcard() || ref.isThis()) {
      fail(ErrorKind::KindMismatch,
           "auxiliary function '" + *ref.function +
               "' needs a string variable",
           pos);
    }
    if (TypeRegistry::kindOf(rule_.typeOf(ref.var)) != ValueKind::String) {
      fail(ErrorKind::KindMismatch,
           "auxiliary function '" + *ref.function + "' applied to " +
               toString(TypeRegistry::kindOf(rule_.typeOf(ref.var))) +
               "-typed variable '" + ref.var + "'",
           pos);
    }
  }

  void checkConstraint(const ConstraintExpr& c) {
    if (c.kind == ConstraintExpr::Kind::Implication) {
      for (const auto& op : c.operands) checkConstraint(op);
      return;
    }
    if (c.subject.isWildcard() || c.subject.isThis()) {
      fail(ErrorKind::UnresolvedVariable,
           "constraint subject must be a declared variable", c.pos);
    }
    checkVariable(c.subject.var, c.pos);
    checkFunction(c.subject, c.pos);
    ValueKind subjectKind = rule_.kindOf(c.subject);
    for (const auto& v : c.values) {
      if (v.kind != c.values.front().kind) {
        fail(ErrorKind::KindMismatch,
             "constants of mixed kinds in one list", c.pos);
      }
      ValueKind constKind = v.kind == Constant::Kind::String
                                ? ValueKind::String
                                : ValueKind::Integer;
      if (constKind != subjectKind) {
        fail(ErrorKind::KindMismatch,
             std::string(toString(constKind)) + " constant " + v.spelling() +
                 " constrains " + toString(subjectKind) + "-typed '" +
                 c.subject.spelling() + "'",
             c.pos);
      }
    }
  }

  void checkClause(const PredicateClause& clause) {
    for (const auto& arg : clause.args) {
      checkVariable(arg.var, clause.pos);
      checkFunction(arg, clause.pos);
    }
    if (clause.afterAnchor) checkLabel(*clause.afterAnchor, clause.pos, "after");
  }

  ResolvedRule rule_;
  const TypeRegistry& registry_;
};

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read file", {}, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ResolvedRule validateRule(const RuleAst& ast, const TypeRegistry& registry) {
  return Validator(ast, registry).run();
}

Ruleset parseRuleset(const std::vector<RuleSource>& sources,
                     const std::string& manifest) {
  Ruleset set;
  std::vector<Error> errors;
  if (!manifest.empty()) {
    try {
      set.types.merge(TypeRegistry::parseManifest(manifest));
    } catch (const Error& e) {
      errors.push_back(e);
    }
  }
  std::vector<RuleAst> parsed;
  for (const auto& src : sources) {
    try {
      parsed.push_back(parseRule(src));
    } catch (const Error& e) {
      errors.push_back(e);
    }
  }
  for (const auto& ast : parsed) set.types.add(ast.specType);
  std::map<std::string, std::string> specFiles;
  for (const auto& ast : parsed) {
    auto [it, fresh] = specFiles.emplace(ast.specType, ast.file);
    if (!fresh) {
      errors.emplace_back(ErrorKind::DuplicateSpec,
                          "SPEC " + ast.specType + " already defined in " +
                              it->second,
                          SourcePos{1, 1}, ast.file);
      continue;
    }
    try {
      set.rules.push_back(validateRule(ast, set.types));
    } catch (const Error& e) {
      errors.push_back(e);
    }
  }
  if (!errors.empty()) throw ErrorList(std::move(errors));
  std::vector<std::pair<std::string, const std::string*>> keyed;
  for (const auto& src : sources) {
    keyed.emplace_back(std::filesystem::path(src.path).filename().string(), &src.text);
  }
  std::sort(keyed.begin(), keyed.end());
  Fingerprint digest;
  for (const auto& [name, text] : keyed) {
    digest.add(name).add(std::string_view("\0", 1)).add(*text).add(std::string_view("\0", 1));
  }
  set.fingerprint = digest.add(manifest).hex();
  std::sort(set.rules.begin(), set.rules.end(),
            [](const auto& a, const auto& b) {
              return a.specType() < b.specType();
            });
  return set;
}

Ruleset parseRuleset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ErrorList({Error(ErrorKind::Io, "not a directory", {}, dir.string())});
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".crysl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RuleSource> sources;
  std::vector<Error> ioErrors;
  for (const auto& f : files) {
    try {
      sources.push_back({f.string(), readFile(f)});
    } catch (const Error& e) {
      ioErrors.push_back(e);
    }
  }
  std::string manifest;
  fs::path manifestPath = dir / "types.manifest";
  if (fs::exists(manifestPath)) {
    try {
      manifest = readFile(manifestPath);
    } catch (const Error& e) {
      ioErrors.push_back(e);
    }
  }
  if (!ioErrors.empty()) throw ErrorList(std::move(ioErrors));
  try {
    return parseRuleset(sources, manifest);
  } catch (ErrorList& list) {
    // Manifest errors come back without a file name.
    std::vector<Error> fixed;
    for (const auto& e : list.errors()) {
      fixed.push_back(e.file() == "types.manifest"
                          ? e.withFile(manifestPath.string())
                          : e);
    }
    throw ErrorList(std::move(fixed));
  }
}

}  // namespace crysl::frontend
