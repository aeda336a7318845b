#pragma once

#include <chrono>
#include <map>
#include <set>
#include <vector>

#include "crysl/analysis/finding.hpp"
#include "crysl/minij/ir.hpp"

namespace crysl::analysis {

using compile::EventId;
using compile::StateSet;
using minij::NodeId;

// Result of tracking one allocation site through the program.
//
// The object is followed through local variables, copies, parameters and
// return values with call-string contexts. Each abstract instance carries
// the automaton state set reached on one group of paths; instances are
// joined as a set at merge points, so each branch keeps its own state set.
struct SiteTypestate {
  minij::AllocationSite site;
  // State sets of the object's instances on entry to a node, over all
  // contexts. Instances stay here after their last use, frozen in the
  // state they ended in. An instance whose call was rejected has the empty
  // set from then on but its later calls are still recorded in `events`.
  std::map<NodeId, std::set<StateSet>> statesIn;
  // Nodes reachable on some path that has not executed the allocation.
  std::set<NodeId> maybeAbsent;
  // Calls delivered to the object (including the allocating call) and the
  // event patterns each one matches.
  std::map<NodeId, std::set<EventId>> events;
  // Calls on the object that match a FORBIDDEN signature.
  std::set<NodeId> forbiddenCalls;
  std::vector<Finding> orderErrors;
  bool timedOut = false;
};

SiteTypestate runTypestate(const minij::ProgramIr& ir, const minij::Liveness& live,
                           const minij::CallGraph& cg, const minij::AllocationSite& site,
                           const frontend::TypeRegistry& types,
                           std::chrono::steady_clock::time_point deadline);

}  // namespace crysl::analysis
