#include "crysl/frontend/ast.hpp"

#include <algorithm>
#include <sstream>

namespace crysl::frontend {

OrderExpr OrderExpr::makeRef(std::string label, SourcePos pos) {
  OrderExpr e;
  e.kind = Kind::Ref;
  e.ref = std::move(label);
  e.pos = pos;
  return e;
}

OrderExpr OrderExpr::makeUnary(Kind kind, OrderExpr child, SourcePos pos) {
  OrderExpr e;
  e.kind = kind;
  e.children.push_back(std::move(child));
  e.pos = pos;
  return e;
}

OrderExpr OrderExpr::makeBinary(Kind kind, OrderExpr lhs, OrderExpr rhs,
                                SourcePos pos) {
  OrderExpr e;
  e.kind = kind;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  e.pos = pos;
  return e;
}

std::size_t OrderExpr::nodeCount() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.nodeCount();
  return n;
}

Constant Constant::ofString(std::string s) {
  Constant c;
  c.kind = Kind::String;
  c.text = std::move(s);
  return c;
}

Constant Constant::ofInteger(long long v) {
  Constant c;
  c.kind = Kind::Integer;
  c.integer = v;
  c.text = std::to_string(v);
  return c;
}

std::string Constant::spelling() const {
  if (kind == Kind::Integer) return std::to_string(integer);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

std::string ValueRef::spelling() const {
  if (function) return *function + "(" + var + ")";
  return var;
}

namespace {

void collectVariables(const ConstraintExpr& c, std::vector<std::string>& out) {
  if (c.kind == ConstraintExpr::Kind::Membership) {
    if (std::find(out.begin(), out.end(), c.subject.var) == out.end()) {
      out.push_back(c.subject.var);
    }
    return;
  }
  for (const auto& op : c.operands) collectVariables(op, out);
}

}  // namespace

std::vector<std::string> ConstraintExpr::variables() const {
  std::vector<std::string> out;
  collectVariables(*this, out);
  return out;
}

std::string ConstraintExpr::spelling() const {
  if (kind == Kind::Implication) {
    return lhs().spelling() + " => " + rhs().spelling();
  }
  std::string out = subject.spelling() + " in {";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i].spelling();
  }
  return out + "}";
}

std::string PredicateClause::spelling() const {
  std::string out = name + "[";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].spelling();
  }
  out += "]";
  if (afterAnchor) out += " after " + *afterAnchor;
  return out;
}

bool structurallyEqual(const OrderExpr& a, const OrderExpr& b) {
  if (a.kind != b.kind || a.ref != b.ref ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurallyEqual(a.children[i], b.children[i])) return false;
  }
  return true;
}

namespace {

bool sameConstant(const Constant& a, const Constant& b) {
  if (a.kind != b.kind) return false;
  return a.kind == Constant::Kind::Integer ? a.integer == b.integer
                                           : a.text == b.text;
}

bool sameRef(const ValueRef& a, const ValueRef& b) {
  return a.var == b.var && a.function == b.function;
}

bool sameClause(const PredicateClause& a, const PredicateClause& b) {
  return a.name == b.name && a.afterAnchor == b.afterAnchor &&
         std::equal(a.args.begin(), a.args.end(), b.args.begin(),
                    b.args.end(), sameRef);
}

template <typename T, typename Eq>
bool sameList(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), eq);
}

}  // namespace

bool structurallyEqual(const ConstraintExpr& a, const ConstraintExpr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ConstraintExpr::Kind::Membership) {
    return sameRef(a.subject, b.subject) &&
           sameList(a.values, b.values, sameConstant);
  }
  return sameList(a.operands, b.operands,
                  [](const auto& x, const auto& y) {
                    return structurallyEqual(x, y);
                  });
}

bool structurallyEqual(const RuleAst& a, const RuleAst& b) {
  auto sameObject = [](const ObjectDecl& x, const ObjectDecl& y) {
    return x.type == y.type && x.name == y.name;
  };
  auto sameEvent = [](const EventDecl& x, const EventDecl& y) {
    return x.label == y.label && x.methodName == y.methodName &&
           x.params == y.params && x.returnBinding == y.returnBinding;
  };
  auto sameAggregate = [](const Aggregate& x, const Aggregate& y) {
    return x.name == y.name && x.labels == y.labels;
  };
  auto sameForbidden = [](const ForbiddenDecl& x, const ForbiddenDecl& y) {
    return x.methodName == y.methodName && x.paramTypes == y.paramTypes &&
           x.replacement == y.replacement;
  };
  auto sameConstraint = [](const ConstraintExpr& x, const ConstraintExpr& y) {
    return structurallyEqual(x, y);
  };
  return a.specType == b.specType && sameList(a.objects, b.objects, sameObject) &&
         sameList(a.events, b.events, sameEvent) &&
         sameList(a.aggregates, b.aggregates, sameAggregate) &&
         sameList(a.forbidden, b.forbidden, sameForbidden) &&
         structurallyEqual(a.order, b.order) &&
         sameList(a.constraints, b.constraints, sameConstraint) &&
         sameList(a.requirements, b.requirements, sameClause) &&
         sameList(a.ensures, b.ensures, sameClause) &&
         sameList(a.negates, b.negates, sameClause);
}

std::string toString(const OrderExpr& expr) {
  using K = OrderExpr::Kind;
  switch (expr.kind) {
    case K::Ref: return "Ref " + expr.ref;
    case K::Seq:
      return "Seq(" + toString(expr.children[0]) + ", " +
             toString(expr.children[1]) + ")";
    case K::Alt:
      return "Alt(" + toString(expr.children[0]) + ", " +
             toString(expr.children[1]) + ")";
    case K::Opt: return "Opt(" + toString(expr.children[0]) + ")";
    case K::Star: return "Star(" + toString(expr.children[0]) + ")";
    case K::Plus: return "Plus(" + toString(expr.children[0]) + ")";
  }
  return {};
}

}  // namespace crysl::frontend
