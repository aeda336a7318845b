#include "crysl/compile/nfa.hpp"

namespace crysl::compile {

StateId Nfa::addState() {
  transitions_.emplace_back();
  return static_cast<StateId>(transitions_.size() - 1);
}

void Nfa::addTransition(StateId from, EventId event, StateId to) {
  transitions_.at(from)[event].insert(to);
}

void Nfa::setAccepting(StateId s, bool accepting) {
  if (accepting) {
    accepting_.insert(s);
  } else {
    accepting_.erase(s);
  }
}

StateSet Nfa::allStates() const {
  StateSet all;
  for (StateId s = 0; s < stateCount(); ++s) all.insert(s);
  return all;
}

std::set<EventId> Nfa::alphabet() const {
  std::set<EventId> out;
  for (const auto& row : transitions_) {
    for (const auto& [event, _] : row) out.insert(event);
  }
  return out;
}

std::set<EventId> Nfa::enabled(const StateSet& from) const {
  std::set<EventId> out;
  for (StateId s : from) {
    for (const auto& [event, targets] : transitions_.at(s)) {
      if (!targets.empty()) out.insert(event);
    }
  }
  return out;
}

StateSet Nfa::step(const StateSet& from, EventId event) const {
  StateSet out;
  for (StateId s : from) {
    const auto& row = transitions_.at(s);
    if (auto it = row.find(event); it != row.end()) {
      out.insert(it->second.begin(), it->second.end());
    }
  }
  return out;
}

StateSet Nfa::step(const StateSet& from, const std::set<EventId>& events) const {
  StateSet out;
  for (EventId e : events) {
    StateSet part = step(from, e);
    out.insert(part.begin(), part.end());
  }
  return out;
}

bool Nfa::anyAccepting(const StateSet& states) const {
  for (StateId s : states) {
    if (isAccepting(s)) return true;
  }
  return false;
}

bool Nfa::accepts(std::span<const EventId> word) const {
  StateSet current = initialSet();
  for (EventId e : word) {
    current = step(current, e);
    if (current.empty()) return false;
  }
  return anyAccepting(current);
}

SubsetAutomaton::SubsetAutomaton(const Nfa& nfa) : nfa_(nfa) {
  intern(nfa.initialSet());
}

int SubsetAutomaton::intern(const StateSet& states) {
  auto [it, fresh] = ids_.emplace(states, static_cast<int>(states_.size()));
  if (fresh) states_.push_back(states);
  return it->second;
}

int SubsetAutomaton::step(int dfaState, EventId event) {
  auto key = std::make_pair(dfaState, event);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  int next = intern(nfa_.step(states_.at(dfaState), event));
  cache_.emplace(key, next);
  return next;
}

bool SubsetAutomaton::isAccepting(int dfaState) const {
  return nfa_.anyAccepting(states_.at(dfaState));
}

}  // namespace crysl::compile
