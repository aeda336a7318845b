#include <deque>

#include "crysl/compile/compiled_rule.hpp"

namespace crysl::compile {

namespace {

// Automaton with ε-moves, only used during construction.
struct EpsilonNfa {
  std::vector<std::map<EventId, std::set<int>>> moves;
  std::vector<std::vector<int>> epsilon;

  int add() {
    moves.emplace_back();
    epsilon.emplace_back();
    return static_cast<int>(moves.size() - 1);
  }
};

struct Fragment {
  int start;
  int end;
};

class Thompson {
 public:
  explicit Thompson(const std::map<std::string, std::vector<EventId>>& labels)
      : labels_(labels) {}

  Fragment build(const frontend::OrderExpr& e) {
    using K = frontend::OrderExpr::Kind;
    switch (e.kind) {
      case K::Ref: {
        Fragment f{g.add(), g.add()};
        for (EventId ev : labels_.at(e.ref)) g.moves[f.start][ev].insert(f.end);
        return f;
      }
      case K::Seq: {
        Fragment a = build(e.children[0]);
        Fragment b = build(e.children[1]);
        g.epsilon[a.end].push_back(b.start);
        return {a.start, b.end};
      }
      case K::Alt: {
        Fragment a = build(e.children[0]);
        Fragment b = build(e.children[1]);
        Fragment f{g.add(), g.add()};
        g.epsilon[f.start].push_back(a.start);
        g.epsilon[f.start].push_back(b.start);
        g.epsilon[a.end].push_back(f.end);
        g.epsilon[b.end].push_back(f.end);
        return f;
      }
      case K::Opt:
      case K::Star:
      case K::Plus: {
        Fragment a = build(e.children[0]);
        Fragment f{g.add(), g.add()};
        g.epsilon[f.start].push_back(a.start);
        g.epsilon[a.end].push_back(f.end);
        if (e.kind != K::Opt) g.epsilon[a.end].push_back(a.start);
        if (e.kind != K::Plus) g.epsilon[f.start].push_back(f.end);
        return f;
      }
    }
    return {0, 0};
  }

  EpsilonNfa g;

 private:
  const std::map<std::string, std::vector<EventId>>& labels_;
};

std::set<int> closure(const EpsilonNfa& g, int s) {
  std::set<int> seen{s};
  std::vector<int> work{s};
  while (!work.empty()) {
    int q = work.back();
    work.pop_back();
    for (int t : g.epsilon[q]) {
      if (seen.insert(t).second) work.push_back(t);
    }
  }
  return seen;
}

}  // namespace

Nfa compileOrder(const frontend::OrderExpr& order,
                 const std::map<std::string, std::vector<EventId>>& labelEvents) {
  Thompson builder(labelEvents);
  Fragment whole = builder.build(order);
  const EpsilonNfa& g = builder.g;

  // δ'(s, a) = ∪ δ(q, a) for q in closure(s); F' = {s | closure(s) ∩ F ≠ ∅}.
  // Only the start state and targets of symbol moves survive.
  std::vector<std::set<int>> closures(g.moves.size());
  for (std::size_t s = 0; s < g.moves.size(); ++s) {
    closures[s] = closure(g, static_cast<int>(s));
  }

  Nfa nfa;
  std::map<int, StateId> renumber;
  std::deque<int> queue;
  auto visit = [&](int old) {
    auto [it, fresh] = renumber.emplace(old, 0);
    if (fresh) {
      it->second = nfa.addState();
      queue.push_back(old);
    }
    return it->second;
  };
  nfa.setInitial(visit(whole.start));
  while (!queue.empty()) {
    int old = queue.front();
    queue.pop_front();
    StateId from = renumber.at(old);
    std::map<EventId, std::set<int>> merged;
    for (int q : closures[old]) {
      for (const auto& [ev, targets] : g.moves[q]) {
        merged[ev].insert(targets.begin(), targets.end());
      }
    }
    for (const auto& [ev, targets] : merged) {
      for (int t : targets) nfa.addTransition(from, ev, visit(t));
    }
    if (closures[old].count(whole.end)) nfa.setAccepting(from);
  }
  return nfa;
}

}  // namespace crysl::compile
