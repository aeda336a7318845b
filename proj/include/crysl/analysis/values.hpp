#pragma once

#include <map>
#include <set>
#include <string>

#include "crysl/minij/ir.hpp"
#include "crysl/semantics/value.hpp"

namespace crysl::analysis {

using semantics::RuntimeValue;

// Possible values of an expression over all paths. Objects are identified
// by the node that created them ("n<id>"). When some path yields a value
// that cannot be determined, `complete` is false and Unknown is a member.
struct ValueSet {
  std::set<RuntimeValue> values;
  bool complete = true;

  void add(const RuntimeValue& v);
  void merge(const ValueSet& other);
  // Values other than Unknown.
  std::set<RuntimeValue> known() const;
  bool empty() const { return values.empty(); }
};

// Identity of the object created at a node.
RuntimeValue objectAt(minij::NodeId node);

// On-demand backward extraction of constant values. Results are cached;
// the extractor is tied to one program.
class ValueExtractor {
 public:
  ValueExtractor(const minij::ProgramIr& ir, const minij::CallGraph& cg);

  // Value of an operand just before `at` executes.
  ValueSet valueOf(minij::NodeId at, const minij::Operand& op);
  ValueSet varBefore(minij::NodeId at, const std::string& var);
  // Value a node assigns to its result variable.
  ValueSet definedBy(minij::NodeId def);

 private:
  const minij::ProgramIr& ir_;
  const minij::CallGraph& cg_;
  std::map<std::pair<minij::NodeId, std::string>, ValueSet> cache_;
  std::set<std::pair<minij::NodeId, std::string>> active_;
};

}  // namespace crysl::analysis
