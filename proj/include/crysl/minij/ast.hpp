#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crysl/error.hpp"

namespace crysl::minij {

// A call argument, returned value or copied value: a variable or a literal.
// `true`/`false` are the integers 1/0.
struct Operand {
  enum class Kind { Var, String, Int };

  Kind kind = Kind::Var;
  std::string text;  // variable name or string value
  long long integer = 0;
  SourcePos pos;

  bool isVar() const { return kind == Kind::Var; }
  bool isLiteral() const { return kind != Kind::Var; }
  std::string spelling() const;
};

struct CallExpr {
  enum class Kind { Instance, Static, User };

  Kind kind = Kind::User;
  std::string receiver;  // Instance: receiver variable
  std::string type;      // Static: qualified class name
  std::string method;    // method or user function name
  std::vector<Operand> args;
  SourcePos pos;
};

struct NewExpr {
  std::string type;
  std::vector<Operand> args;
  SourcePos pos;
};

struct RValue {
  enum class Kind { Operand, New, Call };

  Kind kind = Kind::Operand;
  Operand operand;
  NewExpr newExpr;
  CallExpr call;
};

struct Stmt {
  enum class Kind { Decl, Assign, Call, If, While, Return };

  Kind kind = Kind::Call;
  std::string declType;  // Decl
  std::string var;       // Decl, Assign
  RValue value;          // Decl, Assign
  CallExpr call;         // Call
  std::string cond;      // If, While
  std::vector<Stmt> body;      // If (then), While
  std::vector<Stmt> elseBody;  // If
  std::optional<Operand> returned;
  SourcePos pos;
};

struct Param {
  std::string type;
  std::string name;
  SourcePos pos;
};

struct Function {
  std::string returnType;
  std::string name;
  std::vector<Param> params;
  std::vector<Stmt> body;
  SourcePos pos;
  // Parameter and local variable -> declared (qualified) type.
  std::map<std::string, std::string> varTypes;
};

struct Program {
  std::string file;
  std::string source;
  std::map<std::string, std::string> imports;  // simple name -> qualified
  std::vector<Function> functions;

  const Function* find(const std::string& name) const;
  const Function& main() const { return *find("main"); }
};

}  // namespace crysl::minij
