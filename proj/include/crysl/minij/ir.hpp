#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crysl/compile/compiled_rule.hpp"
#include "crysl/minij/ast.hpp"

namespace crysl::minij {

using NodeId = int;

inline constexpr const char* kReturnVar = "$ret";

// One CFG node. All functions share a single node numbering.
struct Node {
  enum class Kind { Entry, Exit, Const, Copy, Call, New, Branch, Return };

  Kind kind = Kind::Entry;
  int function = 0;
  SourcePos pos;
  std::string result;   // variable defined by the node, "" if none
  Operand value;        // Const: the literal; Copy: the source variable
  CallExpr call;        // Call
  NewExpr newExpr;      // New
  std::string cond;     // Branch
  std::optional<Operand> returned;  // Return
  std::vector<NodeId> succ;
  std::vector<NodeId> pred;

  // Variables the node reads.
  std::vector<std::string> uses() const;
};

struct FunctionIr {
  std::string name;
  const Function* ast = nullptr;
  NodeId entry = 0;
  NodeId exit = 0;
  std::vector<NodeId> nodes;  // in creation order, entry first

  const std::string& typeOf(const std::string& var) const;
};

// Lowered program. If statements become a branch node whose successors are
// the first nodes of each arm (or the join point for an empty arm); while
// loops become a branch node with a back edge from the end of the body.
struct ProgramIr {
  const Program* program = nullptr;
  std::vector<Node> nodes;
  std::vector<FunctionIr> functions;  // same order as program->functions

  const Node& node(NodeId id) const { return nodes.at(id); }
  const FunctionIr& functionOf(NodeId id) const {
    return functions.at(nodes.at(id).function);
  }
  int functionIndex(const std::string& name) const;  // -1 if absent
  int mainIndex() const { return functionIndex("main"); }

  // Static type of an argument: a variable's declared type, or the type of
  // a literal.
  std::string argType(NodeId at, const Operand& op) const;
  std::vector<std::string> argTypes(NodeId at, const std::vector<Operand>& ops) const;
};

// The program must outlive the result.
ProgramIr buildCfg(const Program& program);

struct Liveness {
  std::vector<std::set<std::string>> liveIn;
  std::vector<std::set<std::string>> liveOut;
};
Liveness computeLiveness(const ProgramIr& ir);

struct CallEdge {
  NodeId callSite;
  int callee;

  friend auto operator<=>(const CallEdge&, const CallEdge&) = default;
};

struct CallGraph {
  std::set<CallEdge> edges;
  std::set<int> reachable;  // function indices reachable from main

  std::vector<NodeId> callSitesOf(int callee) const;
};

// Direct calls to user-defined functions only; API calls are events, not
// call-graph edges.
CallGraph buildCallGraph(const ProgramIr& ir);

struct AllocationSite {
  NodeId node;
  std::string type;
  const compile::CompiledRule* rule;
};

// `new T(..)` of a type with a rule, and static calls whose result is
// assigned to a variable declared with a type that has a rule, in functions
// reachable from main. Ordered by node id.
std::vector<AllocationSite> findAllocationSites(
    const ProgramIr& ir, const CallGraph& cg,
    const compile::CompiledRuleSet& rules);

}  // namespace crysl::minij
