#include "crysl/minij/ir.hpp"

#include <algorithm>

namespace crysl::minij {

std::vector<std::string> Node::uses() const {
  std::vector<std::string> out;
  auto add = [&](const Operand& op) {
    if (op.isVar()) out.push_back(op.text);
  };
  switch (kind) {
    case Kind::Copy: add(value); break;
    case Kind::Call:
      if (call.kind == CallExpr::Kind::Instance) out.push_back(call.receiver);
      for (const auto& a : call.args) add(a);
      break;
    case Kind::New:
      for (const auto& a : newExpr.args) add(a);
      break;
    case Kind::Branch: out.push_back(cond); break;
    case Kind::Return:
      if (returned) add(*returned);
      break;
    default: break;
  }
  return out;
}

const std::string& FunctionIr::typeOf(const std::string& var) const {
  static const std::string none;
  auto it = ast->varTypes.find(var);
  return it == ast->varTypes.end() ? none : it->second;
}

int ProgramIr::functionIndex(const std::string& name) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string ProgramIr::argType(NodeId at, const Operand& op) const {
  switch (op.kind) {
    case Operand::Kind::Var: return functionOf(at).typeOf(op.text);
    case Operand::Kind::String: return "java.lang.String";
    case Operand::Kind::Int: return "int";
  }
  return {};
}

std::vector<std::string> ProgramIr::argTypes(NodeId at,
                                             const std::vector<Operand>& ops) const {
  std::vector<std::string> out;
  for (const auto& op : ops) out.push_back(argType(at, op));
  return out;
}

namespace {

class CfgBuilder {
 public:
  explicit CfgBuilder(ProgramIr& ir) : ir_(ir) {}

  void build(int index, const Function& fn) {
    fn_ = index;
    FunctionIr& f = ir_.functions[index];
    f.name = fn.name;
    f.ast = &fn;
    f.entry = add(Node::Kind::Entry, fn.pos);
    f.exit = -1;
    std::vector<NodeId> open = lower(fn.body, {f.entry});
    f.exit = add(Node::Kind::Exit, fn.pos);
    for (NodeId r : returns_) link(r, f.exit);
    for (NodeId n : open) link(n, f.exit);
    returns_.clear();
  }

 private:
  NodeId add(Node::Kind kind, SourcePos pos) {
    Node n;
    n.kind = kind;
    n.function = fn_;
    n.pos = pos;
    ir_.nodes.push_back(std::move(n));
    NodeId id = static_cast<NodeId>(ir_.nodes.size() - 1);
    ir_.functions[fn_].nodes.push_back(id);
    return id;
  }

  void link(NodeId from, NodeId to) {
    auto& succ = ir_.nodes[from].succ;
    if (std::find(succ.begin(), succ.end(), to) != succ.end()) return;
    succ.push_back(to);
    ir_.nodes[to].pred.push_back(from);
  }

  NodeId chain(NodeId id, const std::vector<NodeId>& preds) {
    for (NodeId p : preds) link(p, id);
    return id;
  }

  // Lowers `stmts` after the nodes in `preds`; returns the nodes whose
  // fall-through successor is still open.
  std::vector<NodeId> lower(const std::vector<Stmt>& stmts, std::vector<NodeId> preds) {
    for (const auto& s : stmts) preds = lower(s, preds);
    return preds;
  }

  std::vector<NodeId> lower(const Stmt& s, const std::vector<NodeId>& preds) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign: {
        NodeId id = -1;
        switch (s.value.kind) {
          case RValue::Kind::Operand:
            id = add(s.value.operand.isVar() ? Node::Kind::Copy : Node::Kind::Const, s.pos);
            ir_.nodes[id].value = s.value.operand;
            break;
          case RValue::Kind::New:
            id = add(Node::Kind::New, s.pos);
            ir_.nodes[id].newExpr = s.value.newExpr;
            break;
          case RValue::Kind::Call:
            id = add(Node::Kind::Call, s.pos);
            ir_.nodes[id].call = s.value.call;
            break;
        }
        ir_.nodes[id].result = s.var;
        return {chain(id, preds)};
      }
      case Stmt::Kind::Call: {
        NodeId id = add(Node::Kind::Call, s.pos);
        ir_.nodes[id].call = s.call;
        return {chain(id, preds)};
      }
      case Stmt::Kind::If: {
        NodeId branch = add(Node::Kind::Branch, s.pos);
        ir_.nodes[branch].cond = s.cond;
        chain(branch, preds);
        std::vector<NodeId> open = lower(s.body, {branch});
        std::vector<NodeId> elseOpen = lower(s.elseBody, {branch});
        for (NodeId n : elseOpen) {
          if (std::find(open.begin(), open.end(), n) == open.end()) open.push_back(n);
        }
        return open;
      }
      case Stmt::Kind::While: {
        NodeId branch = add(Node::Kind::Branch, s.pos);
        ir_.nodes[branch].cond = s.cond;
        chain(branch, preds);
        for (NodeId n : lower(s.body, {branch})) link(n, branch);
        return {branch};
      }
      case Stmt::Kind::Return: {
        NodeId id = add(Node::Kind::Return, s.pos);
        ir_.nodes[id].returned = s.returned;
        if (s.returned) ir_.nodes[id].result = kReturnVar;
        chain(id, preds);
        returns_.push_back(id);
        return {};
      }
    }
    return preds;
  }

  ProgramIr& ir_;
  int fn_ = 0;
  std::vector<NodeId> returns_;
};

}  // namespace

ProgramIr buildCfg(const Program& program) {
  ProgramIr ir;
  ir.program = &program;
  ir.functions.resize(program.functions.size());
  CfgBuilder builder(ir);
  for (std::size_t i = 0; i < program.functions.size(); ++i) {
    builder.build(static_cast<int>(i), program.functions[i]);
  }
  return ir;
}

Liveness computeLiveness(const ProgramIr& ir) {
  Liveness lv;
  lv.liveIn.resize(ir.nodes.size());
  lv.liveOut.resize(ir.nodes.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId id = static_cast<NodeId>(ir.nodes.size()) - 1; id >= 0; --id) {
      const Node& n = ir.nodes[id];
      std::set<std::string> out;
      for (NodeId s : n.succ) out.insert(lv.liveIn[s].begin(), lv.liveIn[s].end());
      std::set<std::string> in = out;
      if (!n.result.empty()) in.erase(n.result);
      for (const auto& u : n.uses()) in.insert(u);
      if (n.kind == Node::Kind::Exit) in.insert(kReturnVar);
      if (in != lv.liveIn[id] || out != lv.liveOut[id]) {
        lv.liveIn[id] = std::move(in);
        lv.liveOut[id] = std::move(out);
        changed = true;
      }
    }
  }
  return lv;
}

std::vector<NodeId> CallGraph::callSitesOf(int callee) const {
  std::vector<NodeId> out;
  for (const auto& e : edges) {
    if (e.callee == callee) out.push_back(e.callSite);
  }
  return out;
}

CallGraph buildCallGraph(const ProgramIr& ir) {
  CallGraph cg;
  for (NodeId id = 0; id < static_cast<NodeId>(ir.nodes.size()); ++id) {
    const Node& n = ir.nodes[id];
    if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::User) {
      cg.edges.insert({id, ir.functionIndex(n.call.method)});
    }
  }
  int main = ir.mainIndex();
  if (main < 0) return cg;
  std::vector<int> work{main};
  cg.reachable.insert(main);
  while (!work.empty()) {
    int f = work.back();
    work.pop_back();
    for (const auto& e : cg.edges) {
      if (ir.nodes[e.callSite].function == f && cg.reachable.insert(e.callee).second) {
        work.push_back(e.callee);
      }
    }
  }
  return cg;
}

std::vector<AllocationSite> findAllocationSites(
    const ProgramIr& ir, const CallGraph& cg,
    const compile::CompiledRuleSet& rules) {
  std::vector<AllocationSite> out;
  for (NodeId id = 0; id < static_cast<NodeId>(ir.nodes.size()); ++id) {
    const Node& n = ir.nodes[id];
    if (!cg.reachable.count(n.function)) continue;
    std::string type;
    if (n.kind == Node::Kind::New) {
      type = n.newExpr.type;
    } else if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::Static &&
               !n.result.empty()) {
      type = ir.functionOf(id).typeOf(n.result);
    } else {
      continue;
    }
    if (const auto* rule = rules.find(type)) out.push_back({id, type, rule});
  }
  return out;
}

}  // namespace crysl::minij
