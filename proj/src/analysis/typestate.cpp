#include "crysl/analysis/typestate.hpp"

#include <algorithm>
#include <deque>

namespace crysl::analysis {

using minij::CallExpr;
using minij::Node;

namespace {

using Context = std::vector<NodeId>;  // call sites, outermost first

struct Instance {
  std::vector<std::set<std::string>> frames;  // holders per active call
  StateSet states;
  bool dead = false;
  bool absent = false;  // stands for paths that have not allocated yet
  // Left the automaton; still followed so later events are recorded.
  bool failed = false;

  auto operator<=>(const Instance&) const = default;
};

using Fact = std::set<Instance>;

std::string joinLabels(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ", ";
    out += l;
  }
  return out;
}

class Tracker {
 public:
  Tracker(const minij::ProgramIr& ir, const minij::Liveness& live, const minij::CallGraph& cg,
          const minij::AllocationSite& site, const frontend::TypeRegistry& types)
      : ir_(ir), live_(live), cg_(cg), rule_(*site.rule), types_(types),
        alphabet_(rule_.nfa.alphabet()) {
    result_.site = site;
  }

  SiteTypestate run(std::chrono::steady_clock::time_point deadline) {
    int main = ir_.mainIndex();
    Instance absent;
    absent.frames.resize(1);
    absent.absent = true;
    propagate({}, ir_.functions[main].entry, {absent});
    while (!queue_.empty()) {
      if (std::chrono::steady_clock::now() > deadline) {
        result_.timedOut = true;
        break;
      }
      auto point = queue_.front();
      queue_.pop_front();
      queued_.erase(point);
      process(point.first, point.second);
    }
    for (auto& [key, f] : errors_) result_.orderErrors.push_back(std::move(f));
    return std::move(result_);
  }

 private:
  using Point = std::pair<Context, NodeId>;

  void propagate(const Context& ctx, NodeId node, const Fact& fact) {
    Point p{ctx, node};
    Fact& in = in_[p];
    std::size_t before = in.size();
    in.insert(fact.begin(), fact.end());
    if (in.size() != before && queued_.insert(p).second) {
      queue_.push_back(p);
    }
  }

  bool recursive(const Context& ctx, NodeId node, int callee) const {
    if (ir_.node(node).function == callee) return true;
    return std::any_of(ctx.begin(), ctx.end(), [&](NodeId c) {
      return ir_.node(c).function == callee;
    });
  }

  void process(const Context& ctx, NodeId id) {
    const Fact in = in_[{ctx, id}];
    for (const auto& inst : in) {
      if (inst.absent) {
        result_.maybeAbsent.insert(id);
      } else {
        result_.statesIn[id].insert(inst.states);
      }
    }
    const Node& n = ir_.node(id);

    if (n.kind == Node::Kind::Exit) {
      if (ctx.empty()) {
        for (auto inst : in) {
          for (auto& f : inst.frames) f.clear();
          checkDeath(inst, id);
        }
        return;
      }
      NodeId call = ctx.back();
      Context outer(ctx.begin(), ctx.end() - 1);
      const Node& c = ir_.node(call);
      Fact out;
      for (auto inst : in) {
        bool returned = inst.frames.back().count(minij::kReturnVar) > 0;
        inst.frames.pop_back();
        auto& caller = inst.frames.back();
        if (!c.result.empty()) {
          caller.erase(c.result);
          if (returned && !inst.absent && !inst.dead) caller.insert(c.result);
        }
        prune(caller, call);
        checkDeath(inst, call);
        out.insert(inst);
      }
      for (NodeId s : c.succ) propagate(outer, s, out);
      return;
    }

    if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::User) {
      int callee = ir_.functionIndex(n.call.method);
      if (!recursive(ctx, id, callee)) {
        const auto& params = ir_.functions[callee].ast->params;
        Fact out;
        for (auto inst : in) {
          std::set<std::string> frame;
          auto& caller = inst.frames.back();
          for (std::size_t i = 0; i < n.call.args.size(); ++i) {
            const auto& a = n.call.args[i];
            if (a.isVar() && caller.count(a.text)) frame.insert(params[i].name);
          }
          if (!n.result.empty()) caller.erase(n.result);
          prune(caller, id);
          inst.frames.push_back(std::move(frame));
          checkDeath(inst, id);
          out.insert(inst);
        }
        Context inner = ctx;
        inner.push_back(id);
        propagate(inner, ir_.functions[callee].entry, out);
        return;
      }
    }

    Fact out;
    for (auto inst : in) {
      if (inst.absent && id == result_.site.node) continue;
      transfer(inst, id);
      out.insert(inst);
    }
    if (id == result_.site.node) {
      Instance fresh;
      fresh.frames.resize(ctx.size() + 1);
      fresh.frames.back().insert(n.result);
      fresh.states = rule_.nfa.initialSet();
      if (allocationIsEvent(n)) deliver(fresh, id, creationMethod(n), creationArgs(n));
      prune(fresh.frames.back(), id);
      checkDeath(fresh, id);
      out.insert(fresh);
    }
    for (NodeId s : n.succ) propagate(ctx, s, out);
  }

  bool allocationIsEvent(const Node& n) const {
    return n.kind == Node::Kind::New || n.call.type == result_.site.type;
  }

  std::string creationMethod(const Node& n) const {
    return n.kind == Node::Kind::New ? compile::simpleName(n.newExpr.type) : n.call.method;
  }

  const std::vector<minij::Operand>& creationArgs(const Node& n) const {
    return n.kind == Node::Kind::New ? n.newExpr.args : n.call.args;
  }

  // Applies node `id` to a non-allocating instance.
  void transfer(Instance& inst, NodeId id) {
    if (inst.absent || inst.dead) return;
    const Node& n = ir_.node(id);
    auto& cur = inst.frames.back();
    if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::Instance &&
        cur.count(n.call.receiver)) {
      deliver(inst, id, n.call.method, n.call.args);
    }
    if (n.kind == Node::Kind::Call && n.call.kind == CallExpr::Kind::User) {
      // Recursive call: the callee may do anything with a passed object.
      for (const auto& a : n.call.args) {
        if (a.isVar() && cur.count(a.text) && !inst.failed) inst.states = rule_.nfa.allStates();
      }
    }
    bool copied = false;
    if (n.kind == Node::Kind::Copy) copied = cur.count(n.value.text) > 0;
    if (n.kind == Node::Kind::Return && n.returned && n.returned->isVar()) {
      copied = cur.count(n.returned->text) > 0;
    }
    if (!n.result.empty()) {
      cur.erase(n.result);
      if (copied) cur.insert(n.result);
    }
    prune(cur, id);
    checkDeath(inst, id);
  }

  void prune(std::set<std::string>& holders, NodeId id) const {
    const auto& out = live_.liveOut[id];
    std::erase_if(holders, [&](const std::string& v) { return !out.count(v); });
  }

  std::set<std::string> labels(const std::set<EventId>& events) const {
    std::set<std::string> out;
    for (EventId e : events) out.insert(rule_.label(e));
    return out;
  }

  // Records the call and steps the automaton. A call the automaton rejects
  // is an order error and leaves the instance failed.
  void deliver(Instance& inst, NodeId id, const std::string& method,
               const std::vector<minij::Operand>& args) {
    auto argTypes = ir_.argTypes(id, args);
    if (rule_.matchForbidden(method, argTypes)) {
      result_.forbiddenCalls.insert(id);
      return;
    }
    auto matched = rule_.matchEvents(method, argTypes, types_);
    if (matched.empty()) return;
    result_.events[id].insert(matched.begin(), matched.end());
    std::set<EventId> moves;
    std::ranges::set_intersection(matched, alphabet_, std::inserter(moves, moves.end()));
    if (moves.empty() || inst.failed) return;
    StateSet next = rule_.nfa.step(inst.states, moves);
    if (next.empty()) {
      auto expected = labels(rule_.nfa.enabled(inst.states));
      report(id, "order", "unexpected call to " + method + "(); expected " +
                              (expected.empty() ? "no further calls" : "one of " + joinLabels(expected)),
             {{"seen", joinLabels(labels(moves))}, {"expected", joinLabels(expected)}});
      inst.failed = true;
    }
    inst.states = std::move(next);
  }

  void checkDeath(Instance& inst, NodeId at) {
    if (inst.dead || inst.absent) return;
    for (const auto& f : inst.frames) {
      if (!f.empty()) return;
    }
    inst.dead = true;
    if (inst.failed || rule_.nfa.anyAccepting(inst.states)) return;
    auto expected = labels(rule_.nfa.enabled(inst.states));
    report(at, "incomplete", "operation on " + compile::simpleName(rule_.specType) +
                                 " is incomplete; expected one of " + joinLabels(expected),
           {{"expected", joinLabels(expected)}});
  }

  void report(NodeId at, const std::string& kind, std::string message,
              std::map<std::string, std::string> details) {
    auto key = std::make_pair(at, kind);
    if (errors_.count(key)) return;
    Finding f;
    f.category = Category::OrderError;
    f.file = ir_.program->file;
    f.pos = ir_.node(at).pos;
    f.site = result_.site.node;
    f.sitePos = ir_.node(result_.site.node).pos;
    f.ruleType = rule_.specType;
    f.message = std::move(message);
    f.details = std::move(details);
    f.details["kind"] = kind;
    errors_.emplace(key, std::move(f));
  }

  const minij::ProgramIr& ir_;
  const minij::Liveness& live_;
  const minij::CallGraph& cg_;
  const compile::CompiledRule& rule_;
  const frontend::TypeRegistry& types_;
  const std::set<EventId> alphabet_;
  SiteTypestate result_;
  std::map<Point, Fact> in_;
  std::deque<Point> queue_;
  std::set<Point> queued_;
  std::map<std::pair<NodeId, std::string>, Finding> errors_;
};

}  // namespace

SiteTypestate runTypestate(const minij::ProgramIr& ir, const minij::Liveness& live,
                           const minij::CallGraph& cg, const minij::AllocationSite& site,
                           const frontend::TypeRegistry& types,
                           std::chrono::steady_clock::time_point deadline) {
  return Tracker(ir, live, cg, site, types).run(deadline);
}

}  // namespace crysl::analysis
