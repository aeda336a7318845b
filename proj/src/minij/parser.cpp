#include "crysl/minij/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "crysl/lex.hpp"

namespace crysl::minij {

std::string Operand::spelling() const {
  switch (kind) {
    case Kind::Var: return text;
    case Kind::String: return "\"" + text + "\"";
    case Kind::Int: return std::to_string(integer);
  }
  return text;
}

const Function* Program::find(const std::string& name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

const std::set<std::string> kKeywords = {"if",   "else", "while", "return",
                                         "new",  "import", "true", "false"};

class ProgramParser {
 public:
  ProgramParser(std::vector<Token> tokens, Program& program)
      : cur_(std::move(tokens)), program_(program) {}

  void parse() {
    while (cur_.peek().isIdent("import")) parseImport();
    while (!cur_.atEnd()) program_.functions.push_back(parseFunction());
  }

 private:
  void parseImport() {
    cur_.next();
    std::string name = cur_.expectIdent("package or class name").text;
    while (cur_.acceptPunct(".")) name += "." + cur_.expectIdent("class name").text;
    cur_.expectPunct(";");
    auto dot = name.rfind('.');
    program_.imports[dot == std::string::npos ? name : name.substr(dot + 1)] = name;
  }

  std::string resolveType(const std::string& name) const {
    if (name.find('.') != std::string::npos) return name;
    if (auto it = program_.imports.find(name); it != program_.imports.end()) {
      return it->second;
    }
    if (name == "String" || name == "Object") return "java.lang." + name;
    return name;
  }

  const Token& expectName(const char* what) {
    const Token& tok = cur_.expectIdent(what);
    if (kKeywords.count(tok.text)) cur_.failAt(tok, "'" + tok.text + "' is a keyword", {what});
    return tok;
  }

  std::string parseQualified() {
    std::string name = expectName("type name").text;
    while (cur_.peek().isPunct(".") && cur_.peek(1).kind == Token::Kind::Ident) {
      cur_.next();
      name += "." + cur_.next().text;
    }
    return name;
  }

  std::string parseType() {
    std::string type = resolveType(parseQualified());
    while (cur_.peek().isPunct("[")) {
      cur_.next();
      cur_.expectPunct("]");
      type += "[]";
    }
    return type;
  }

  void declare(Function& fn, const Token& name, const std::string& type) {
    if (!fn.varTypes.emplace(name.text, type).second) {
      throw Error(ErrorKind::DuplicateDeclaration,
                  "variable '" + name.text + "' is already declared", name.pos);
    }
  }

  Function parseFunction() {
    Function fn;
    fn.pos = cur_.peek().pos;
    fn.returnType = parseType();
    fn.name = expectName("function name").text;
    cur_.expectPunct("(");
    if (!cur_.acceptPunct(")")) {
      do {
        Param p;
        p.pos = cur_.peek().pos;
        p.type = parseType();
        const Token& name = expectName("parameter name");
        p.name = name.text;
        declare(fn, name, p.type);
        fn.params.push_back(p);
      } while (cur_.acceptPunct(","));
      cur_.expectPunct(")");
    }
    fn_ = &fn;
    fn.body = parseBlock();
    fn_ = nullptr;
    return fn;
  }

  std::vector<Stmt> parseBlock() {
    cur_.expectPunct("{");
    std::vector<Stmt> out;
    while (!cur_.acceptPunct("}")) {
      if (cur_.atEnd()) cur_.fail({"'}'"});
      out.push_back(parseStmt());
    }
    return out;
  }

  std::vector<Stmt> parseBody() {
    if (cur_.peek().isPunct("{")) return parseBlock();
    return {parseStmt()};
  }

  std::string parseCondition() {
    cur_.expectPunct("(");
    std::string var = expectName("condition variable").text;
    cur_.expectPunct(")");
    return var;
  }

  // type-name [ "[]" ]* name "="
  bool atDeclaration() const {
    std::size_t i = 0;
    if (cur_.peek(i).kind != Token::Kind::Ident) return false;
    ++i;
    while (cur_.peek(i).isPunct(".") && cur_.peek(i + 1).kind == Token::Kind::Ident) i += 2;
    while (cur_.peek(i).isPunct("[") && cur_.peek(i + 1).isPunct("]")) i += 2;
    return cur_.peek(i).kind == Token::Kind::Ident && cur_.peek(i + 1).isPunct("=");
  }

  Stmt parseStmt() {
    Stmt s;
    const Token& first = cur_.peek();
    s.pos = first.pos;
    if (first.isIdent("if")) {
      cur_.next();
      s.kind = Stmt::Kind::If;
      s.cond = parseCondition();
      s.body = parseBody();
      if (cur_.acceptIdent("else")) s.elseBody = parseBody();
      return s;
    }
    if (first.isIdent("while")) {
      cur_.next();
      s.kind = Stmt::Kind::While;
      s.cond = parseCondition();
      s.body = parseBody();
      return s;
    }
    if (first.isIdent("return")) {
      cur_.next();
      s.kind = Stmt::Kind::Return;
      if (!cur_.acceptPunct(";")) {
        s.returned = parseOperand();
        cur_.expectPunct(";");
      }
      return s;
    }
    if (atDeclaration()) {
      s.kind = Stmt::Kind::Decl;
      s.declType = parseType();
      const Token& name = expectName("variable name");
      s.var = name.text;
      cur_.expectPunct("=");
      s.value = parseRValue();
      declare(*fn_, name, s.declType);
      cur_.expectPunct(";");
      return s;
    }
    if (first.kind == Token::Kind::Ident && cur_.peek(1).isPunct("=")) {
      s.kind = Stmt::Kind::Assign;
      s.var = expectName("variable name").text;
      cur_.next();
      s.value = parseRValue();
      cur_.expectPunct(";");
      return s;
    }
    if (first.kind != Token::Kind::Ident) {
      cur_.fail({"statement"});
    }
    s.kind = Stmt::Kind::Call;
    s.call = parseCall();
    cur_.expectPunct(";");
    return s;
  }

  Operand parseOperand() {
    Operand op;
    const Token& tok = cur_.peek();
    op.pos = tok.pos;
    if (tok.kind == Token::Kind::String) {
      op.kind = Operand::Kind::String;
      op.text = cur_.next().text;
    } else if (tok.kind == Token::Kind::Integer) {
      op.kind = Operand::Kind::Int;
      op.integer = cur_.next().integer;
    } else if (tok.isPunct("-") && cur_.peek(1).kind == Token::Kind::Integer) {
      cur_.next();
      op.kind = Operand::Kind::Int;
      op.integer = -cur_.next().integer;
    } else if (tok.isIdent("true") || tok.isIdent("false")) {
      op.kind = Operand::Kind::Int;
      op.integer = cur_.next().text == "true" ? 1 : 0;
    } else if (tok.kind == Token::Kind::Ident) {
      op.text = expectName("variable").text;
    } else {
      cur_.fail({"variable", "literal"});
    }
    return op;
  }

  std::vector<Operand> parseArgs() {
    std::vector<Operand> args;
    cur_.expectPunct("(");
    if (!cur_.acceptPunct(")")) {
      do {
        args.push_back(parseOperand());
      } while (cur_.acceptPunct(","));
      cur_.expectPunct(")");
    }
    return args;
  }

  CallExpr parseCall() {
    CallExpr call;
    call.pos = cur_.peek().pos;
    std::vector<std::string> parts{expectName("function or receiver").text};
    while (cur_.acceptPunct(".")) parts.push_back(cur_.expectIdent("method name").text);
    if (!cur_.peek().isPunct("(")) cur_.fail({"'('"});
    call.method = parts.back();
    parts.pop_back();
    if (parts.empty()) {
      call.kind = CallExpr::Kind::User;
    } else if (parts.size() == 1 && fn_->varTypes.count(parts[0])) {
      call.kind = CallExpr::Kind::Instance;
      call.receiver = parts[0];
    } else {
      call.kind = CallExpr::Kind::Static;
      std::string type = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) type += "." + parts[i];
      call.type = resolveType(type);
    }
    call.args = parseArgs();
    return call;
  }

  RValue parseRValue() {
    RValue v;
    const Token& tok = cur_.peek();
    if (tok.isIdent("new")) {
      cur_.next();
      v.kind = RValue::Kind::New;
      v.newExpr.pos = tok.pos;
      v.newExpr.type = resolveType(parseQualified());
      v.newExpr.args = parseArgs();
      return v;
    }
    bool call = tok.kind == Token::Kind::Ident && !tok.isIdent("true") &&
                !tok.isIdent("false") &&
                (cur_.peek(1).isPunct("(") || cur_.peek(1).isPunct("."));
    if (call) {
      v.kind = RValue::Kind::Call;
      v.call = parseCall();
    } else {
      v.kind = RValue::Kind::Operand;
      v.operand = parseOperand();
    }
    return v;
  }

  TokenCursor cur_;
  Program& program_;
  Function* fn_ = nullptr;
};

class Checker {
 public:
  explicit Checker(const Program& program) : program_(program) {}

  void run() {
    std::set<std::string> names;
    for (const auto& fn : program_.functions) {
      if (!names.insert(fn.name).second) {
        throw Error(ErrorKind::DuplicateDeclaration,
                    "function '" + fn.name + "' is already defined", fn.pos);
      }
    }
    if (!program_.find("main")) {
      throw Error(ErrorKind::MissingMain, "program has no function 'main'", endOfInput());
    }
    for (const auto& fn : program_.functions) {
      fn_ = &fn;
      std::set<std::string> assigned;
      for (const auto& p : fn.params) assigned.insert(p.name);
      check(fn.body, assigned);
    }
  }

 private:
  SourcePos endOfInput() const {
    const auto& src = program_.source;
    auto nl = src.rfind('\n');
    int line = 1 + static_cast<int>(std::count(src.begin(), src.end(), '\n'));
    int column = 1 + static_cast<int>(nl == std::string::npos ? src.size() : src.size() - nl - 1);
    return {line, column};
  }

  void use(const std::string& var, SourcePos pos, const std::set<std::string>& assigned) {
    if (!fn_->varTypes.count(var)) {
      throw Error(ErrorKind::UseBeforeDef, "'" + var + "' is not declared", pos);
    }
    if (!assigned.count(var)) {
      throw Error(ErrorKind::UseBeforeDef,
                  "'" + var + "' may be used before it is assigned", pos);
    }
  }

  void use(const Operand& op, const std::set<std::string>& assigned) {
    if (op.isVar()) use(op.text, op.pos, assigned);
  }

  void checkCall(const CallExpr& call, const std::set<std::string>& assigned) {
    if (call.kind == CallExpr::Kind::Instance) use(call.receiver, call.pos, assigned);
    if (call.kind == CallExpr::Kind::User) {
      const Function* callee = program_.find(call.method);
      if (!callee) {
        throw Error(ErrorKind::UndefinedFunction,
                    "function '" + call.method + "' is not defined", call.pos);
      }
      if (callee->params.size() != call.args.size()) {
        throw Error(ErrorKind::UndefinedFunction,
                    "function '" + call.method + "' takes " +
                        std::to_string(callee->params.size()) + " arguments",
                    call.pos);
      }
    }
    for (const auto& a : call.args) use(a, assigned);
  }

  void checkRValue(const RValue& v, const std::set<std::string>& assigned) {
    switch (v.kind) {
      case RValue::Kind::Operand: use(v.operand, assigned); break;
      case RValue::Kind::New:
        for (const auto& a : v.newExpr.args) use(a, assigned);
        break;
      case RValue::Kind::Call: checkCall(v.call, assigned); break;
    }
  }

  // Returns whether the statements can complete normally; `assigned` becomes
  // the set of variables definitely assigned afterwards.
  bool check(const std::vector<Stmt>& stmts, std::set<std::string>& assigned) {
    bool completes = true;
    for (const auto& s : stmts) {
      if (!completes) {
        throw Error(ErrorKind::Syntax, "unreachable statement", s.pos);
      }
      switch (s.kind) {
        case Stmt::Kind::Decl:
        case Stmt::Kind::Assign:
          checkRValue(s.value, assigned);
          if (!fn_->varTypes.count(s.var)) {
            throw Error(ErrorKind::UseBeforeDef, "'" + s.var + "' is not declared", s.pos);
          }
          assigned.insert(s.var);
          break;
        case Stmt::Kind::Call:
          checkCall(s.call, assigned);
          break;
        case Stmt::Kind::If: {
          use(s.cond, s.pos, assigned);
          std::set<std::string> thenSet = assigned;
          std::set<std::string> elseSet = assigned;
          bool thenDone = check(s.body, thenSet);
          bool elseDone = check(s.elseBody, elseSet);
          if (thenDone && elseDone) {
            std::set<std::string> both;
            std::ranges::set_intersection(thenSet, elseSet,
                                          std::inserter(both, both.end()));
            assigned = both;
          } else if (thenDone) {
            assigned = thenSet;
          } else if (elseDone) {
            assigned = elseSet;
          }
          completes = thenDone || elseDone;
          break;
        }
        case Stmt::Kind::While: {
          use(s.cond, s.pos, assigned);
          std::set<std::string> inner = assigned;
          check(s.body, inner);
          break;
        }
        case Stmt::Kind::Return:
          if (s.returned) use(*s.returned, assigned);
          completes = false;
          break;
      }
    }
    return completes;
  }

  const Program& program_;
  const Function* fn_ = nullptr;
};

}  // namespace

Program parseProgram(std::string_view text, const std::string& file) {
  Program program;
  program.file = file;
  program.source = std::string(text);
  try {
    ProgramParser(tokenize(text), program).parse();
    Checker(program).run();
  } catch (const Error& e) {
    throw e.withFile(file);
  }
  return program;
}

Program readProgramFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read program file", {}, path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parseProgram(text.str(), path.string());
}

}  // namespace crysl::minij
