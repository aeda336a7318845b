#include "crysl/analysis/values.hpp"

#include "crysl/frontend/type_registry.hpp"

namespace crysl::analysis {

using minij::Node;
using minij::NodeId;

void ValueSet::add(const RuntimeValue& v) {
  if (v.isUnknown()) complete = false;
  values.insert(v);
}

void ValueSet::merge(const ValueSet& other) {
  values.insert(other.values.begin(), other.values.end());
  complete = complete && other.complete;
}

std::set<RuntimeValue> ValueSet::known() const {
  std::set<RuntimeValue> out;
  for (const auto& v : values) {
    if (!v.isUnknown()) out.insert(v);
  }
  return out;
}

RuntimeValue objectAt(NodeId node) {
  return RuntimeValue::ofObject("n" + std::to_string(node));
}

ValueExtractor::ValueExtractor(const minij::ProgramIr& ir, const minij::CallGraph& cg)
    : ir_(ir), cg_(cg) {}

ValueSet ValueExtractor::valueOf(NodeId at, const minij::Operand& op) {
  ValueSet out;
  switch (op.kind) {
    case minij::Operand::Kind::String: out.add(RuntimeValue::ofString(op.text)); break;
    case minij::Operand::Kind::Int: out.add(RuntimeValue::ofInt(op.integer)); break;
    case minij::Operand::Kind::Var: out = varBefore(at, op.text); break;
  }
  return out;
}

ValueSet ValueExtractor::varBefore(NodeId at, const std::string& var) {
  auto key = std::make_pair(at, var);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (!active_.insert(key).second) return {};  // cycle; other paths supply values

  ValueSet out;
  std::set<NodeId> seen;
  std::vector<NodeId> work(ir_.node(at).pred.begin(), ir_.node(at).pred.end());
  while (!work.empty()) {
    NodeId m = work.back();
    work.pop_back();
    if (!seen.insert(m).second) continue;
    const Node& n = ir_.node(m);
    if (n.result == var) {
      out.merge(definedBy(m));
      continue;
    }
    if (n.kind == Node::Kind::Entry) {
      const auto& fn = ir_.functionOf(m);
      const auto& params = fn.ast->params;
      std::size_t k = 0;
      while (k < params.size() && params[k].name != var) ++k;
      auto callSites = cg_.callSitesOf(n.function);
      if (k == params.size() || callSites.empty()) {
        out.add(RuntimeValue::unknown());
      }
      for (NodeId c : callSites) {
        if (k < params.size()) out.merge(valueOf(c, ir_.node(c).call.args[k]));
      }
      continue;
    }
    work.insert(work.end(), n.pred.begin(), n.pred.end());
  }

  active_.erase(key);
  cache_[key] = out;
  return out;
}

ValueSet ValueExtractor::definedBy(NodeId def) {
  const Node& n = ir_.node(def);
  ValueSet out;
  switch (n.kind) {
    case Node::Kind::Const:
    case Node::Kind::Copy:
      return valueOf(def, n.value);
    case Node::Kind::Return:
      if (n.returned) return valueOf(def, *n.returned);
      break;
    case Node::Kind::New:
      out.add(objectAt(def));
      return out;
    case Node::Kind::Call: {
      if (n.call.kind == minij::CallExpr::Kind::User) {
        int callee = ir_.functionIndex(n.call.method);
        return varBefore(ir_.functions.at(callee).exit, minij::kReturnVar);
      }
      const std::string& type = ir_.functionOf(def).typeOf(n.result);
      if (frontend::TypeRegistry::kindOf(type) == frontend::ValueKind::Other &&
          !frontend::TypeRegistry::isPrimitive(type)) {
        out.add(objectAt(def));
      } else {
        out.add(RuntimeValue::unknown());
      }
      return out;
    }
    default:
      break;
  }
  out.add(RuntimeValue::unknown());
  return out;
}

}  // namespace crysl::analysis
