#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace crysl::compile {

using StateId = int;
using EventId = int;  // index into a rule's event table
using StateSet = std::set<StateId>;

// ε-free nondeterministic automaton over event-declaration ids.
class Nfa {
 public:
  StateId addState();
  void addTransition(StateId from, EventId event, StateId to);
  void setInitial(StateId s) { initial_ = s; }
  void setAccepting(StateId s, bool accepting = true);

  int stateCount() const { return static_cast<int>(transitions_.size()); }
  StateId initial() const { return initial_; }
  bool isAccepting(StateId s) const { return accepting_.count(s) > 0; }
  const StateSet& accepting() const { return accepting_; }
  const std::map<EventId, StateSet>& transitionsFrom(StateId s) const {
    return transitions_.at(s);
  }

  StateSet initialSet() const { return {initial_}; }
  StateSet allStates() const;
  std::set<EventId> alphabet() const;
  std::set<EventId> enabled(const StateSet& from) const;

  // δ lifted to state sets. Passing several events takes the union of
  // their successors (a call matching more than one event pattern).
  StateSet step(const StateSet& from, EventId event) const;
  StateSet step(const StateSet& from, const std::set<EventId>& events) const;

  bool anyAccepting(const StateSet& states) const;
  bool accepts(std::span<const EventId> word) const;

 private:
  std::vector<std::map<EventId, StateSet>> transitions_;
  StateSet accepting_;
  StateId initial_ = 0;
};

// Subset construction: a deterministic view of an Nfa where each DFA state
// is an NFA state set. States are created on demand and memoized; ids are
// stable for one instance (numbered in discovery order).
class SubsetAutomaton {
 public:
  explicit SubsetAutomaton(const Nfa& nfa);

  int initial() const { return 0; }
  int step(int dfaState, EventId event);
  bool isAccepting(int dfaState) const;
  bool isDead(int dfaState) const { return states_.at(dfaState).empty(); }
  const StateSet& nfaStates(int dfaState) const { return states_.at(dfaState); }
  int intern(const StateSet& states);

 private:
  const Nfa& nfa_;
  std::vector<StateSet> states_;
  std::map<StateSet, int> ids_;
  std::map<std::pair<int, EventId>, int> cache_;
};

}  // namespace crysl::compile
