#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crysl/error.hpp"

namespace crysl::frontend {

inline constexpr const char* kWildcard = "_";
inline constexpr const char* kThis = "this";

struct RuleSource {
  std::string path;
  std::string text;
};

struct ObjectDecl {
  std::string type;
  std::string name;
  SourcePos pos;
};

// label: [returnBinding =] methodName(params)
// A param is a rule variable, the wildcard "_" or "this".
struct EventDecl {
  std::string label;
  std::string methodName;
  std::vector<std::string> params;
  std::optional<std::string> returnBinding;
  SourcePos pos;
};

// name := l1 | l2 | ...;
struct Aggregate {
  std::string name;
  std::vector<std::string> labels;
  SourcePos pos;
};

struct ForbiddenDecl {
  std::string methodName;
  std::vector<std::string> paramTypes;
  std::optional<std::string> replacement;
  SourcePos pos;
};

// ORDER regular expression. Seq and Alt are binary and right-nested:
// "a, b, c" is Seq(a, Seq(b, c)).
struct OrderExpr {
  enum class Kind { Seq, Alt, Opt, Star, Plus, Ref };

  Kind kind = Kind::Ref;
  std::string ref;                  // Ref only
  std::vector<OrderExpr> children;  // 2 for Seq/Alt, 1 for Opt/Star/Plus
  SourcePos pos;

  static OrderExpr makeRef(std::string label, SourcePos pos = {});
  static OrderExpr makeUnary(Kind kind, OrderExpr child, SourcePos pos = {});
  static OrderExpr makeBinary(Kind kind, OrderExpr lhs, OrderExpr rhs,
                              SourcePos pos = {});

  std::size_t nodeCount() const;
};

struct Constant {
  enum class Kind { String, Integer };

  Kind kind = Kind::String;
  std::string text;        // unquoted string value
  long long integer = 0;   // Integer only

  static Constant ofString(std::string s);
  static Constant ofInteger(long long v);
  std::string spelling() const;
};

// A variable reference, optionally wrapped in an auxiliary function
// application such as alg(transformation).
struct ValueRef {
  std::string var;
  std::optional<std::string> function;

  bool isWildcard() const { return var == kWildcard; }
  bool isThis() const { return var == kThis; }
  std::string spelling() const;
};

struct ConstraintExpr {
  enum class Kind { Membership, Implication };

  Kind kind = Kind::Membership;
  ValueRef subject;                     // Membership
  std::vector<Constant> values;         // Membership
  std::vector<ConstraintExpr> operands; // Implication: {lhs, rhs}
  SourcePos pos;

  const ConstraintExpr& lhs() const { return operands.at(0); }
  const ConstraintExpr& rhs() const { return operands.at(1); }

  // Variables referenced anywhere in the expression, in first-use order.
  std::vector<std::string> variables() const;
  std::string spelling() const;
};

struct PredicateClause {
  std::string name;
  std::vector<ValueRef> args;
  std::optional<std::string> afterAnchor;
  SourcePos pos;

  std::string spelling() const;
};

struct RuleAst {
  std::string file;
  std::string specType;
  std::vector<ObjectDecl> objects;
  std::vector<EventDecl> events;
  std::vector<Aggregate> aggregates;
  std::vector<ForbiddenDecl> forbidden;
  OrderExpr order;
  std::vector<ConstraintExpr> constraints;
  std::vector<PredicateClause> requirements;  // REQUIRES
  std::vector<PredicateClause> ensures;
  std::vector<PredicateClause> negates;
};

// Structural equality; source positions and file names are ignored.
bool structurallyEqual(const OrderExpr& a, const OrderExpr& b);
bool structurallyEqual(const ConstraintExpr& a, const ConstraintExpr& b);
bool structurallyEqual(const RuleAst& a, const RuleAst& b);

std::string toString(const OrderExpr& expr);

}  // namespace crysl::frontend
