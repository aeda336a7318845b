#include "crysl/frontend/parser.hpp"

#include <array>
#include <map>
#include <sstream>

#include "crysl/lex.hpp"

namespace crysl::frontend {

namespace {

enum class Section {
  Spec,
  Objects,
  Events,
  Forbidden,
  Order,
  Constraints,
  Requires,
  Ensures,
  Negates,
};

struct SectionInfo {
  Section section;
  const char* keyword;
  bool mandatory;
};

constexpr std::array<SectionInfo, 9> kSections = {{
    {Section::Spec, "SPEC", true},
    {Section::Objects, "OBJECTS", true},
    {Section::Events, "EVENTS", true},
    {Section::Forbidden, "FORBIDDEN", false},
    {Section::Order, "ORDER", true},
    {Section::Constraints, "CONSTRAINTS", true},
    {Section::Requires, "REQUIRES", false},
    {Section::Ensures, "ENSURES", true},
    {Section::Negates, "NEGATES", false},
}};

constexpr int kMaxOrderDepth = 200;

const SectionInfo* sectionFor(const Token& tok) {
  if (tok.kind != Token::Kind::Ident) return nullptr;
  for (const auto& info : kSections) {
    if (tok.text == info.keyword) return &info;
  }
  return nullptr;
}

class RuleParser {
 public:
  explicit RuleParser(std::vector<Token> tokens) : cur_(std::move(tokens)) {}

  RuleAst parse() {
    RuleAst ast;
    std::map<Section, SourcePos> seen;
    int lastIndex = -1;
    if (!cur_.peek().isIdent("SPEC")) cur_.fail({"'SPEC'"});
    while (!cur_.atEnd()) {
      const Token& head = cur_.peek();
      const SectionInfo* info = sectionFor(head);
      if (info == nullptr) {
        std::set<std::string> expected;
        for (std::size_t i = lastIndex + 1; i < kSections.size(); ++i) {
          expected.insert(std::string("'") + kSections[i].keyword + "'");
        }
        cur_.fail(std::move(expected));
      }
      int index = static_cast<int>(info - kSections.data());
      if (seen.count(info->section)) {
        throw Error(ErrorKind::DuplicateSection,
                    std::string("section ") + info->keyword +
                        " appears more than once",
                    head.pos);
      }
      if (index < lastIndex) {
        throw Error(ErrorKind::Syntax,
                    std::string("section ") + info->keyword +
                        " must precede " + kSections[lastIndex].keyword,
                    head.pos);
      }
      seen[info->section] = head.pos;
      lastIndex = index;
      cur_.next();
      parseSection(info->section, ast);
    }
    for (const auto& info : kSections) {
      if (info.mandatory && !seen.count(info.section)) {
        throw Error(ErrorKind::MissingMandatorySection,
                    std::string("missing mandatory section ") + info.keyword,
                    cur_.peek().pos);
      }
    }
    return ast;
  }

 private:
  bool atSectionEnd() const {
    return cur_.atEnd() || sectionFor(cur_.peek()) != nullptr;
  }

  void parseSection(Section section, RuleAst& ast) {
    switch (section) {
      case Section::Spec:
        ast.specType = parseQualifiedName();
        cur_.acceptPunct(";");
        break;
      case Section::Objects:
        while (!atSectionEnd()) ast.objects.push_back(parseObject());
        break;
      case Section::Events:
        while (!atSectionEnd()) parseEventItem(ast);
        break;
      case Section::Forbidden:
        while (!atSectionEnd()) ast.forbidden.push_back(parseForbidden());
        break;
      case Section::Order:
        ast.order = parseAlt(0);
        cur_.acceptPunct(";");
        if (!atSectionEnd()) cur_.fail({"',' or '|'", "section keyword"});
        break;
      case Section::Constraints:
        while (!atSectionEnd()) {
          ast.constraints.push_back(parseConstraint());
          if (!cur_.acceptPunct(";") && !cur_.acceptPunct(",") &&
              !atSectionEnd()) {
            cur_.fail({"';'", "','", "'=>'"});
          }
        }
        break;
      case Section::Requires:
        while (!atSectionEnd()) ast.requirements.push_back(parsePredicate());
        break;
      case Section::Ensures:
        while (!atSectionEnd()) ast.ensures.push_back(parsePredicate());
        break;
      case Section::Negates:
        while (!atSectionEnd()) ast.negates.push_back(parsePredicate());
        break;
    }
  }

  std::string parseQualifiedName() {
    std::string name = cur_.expectIdent("qualified name").text;
    while (cur_.peek().isPunct(".") &&
           cur_.peek(1).kind == Token::Kind::Ident) {
      cur_.next();
      name += "." + cur_.next().text;
    }
    return name;
  }

  std::string parseType() {
    std::string type = parseQualifiedName();
    while (cur_.peek().isPunct("[")) {
      cur_.next();
      cur_.expectPunct("]");
      type += "[]";
    }
    return type;
  }

  ObjectDecl parseObject() {
    ObjectDecl decl;
    decl.pos = cur_.peek().pos;
    decl.type = parseType();
    decl.name = cur_.expectIdent("object name").text;
    cur_.expectPunct(";");
    return decl;
  }

  void parseEventItem(RuleAst& ast) {
    const Token& label = cur_.expectIdent("event label");
    if (cur_.acceptPunct(":=")) {
      Aggregate agg;
      agg.name = label.text;
      agg.pos = label.pos;
      agg.labels.push_back(cur_.expectIdent("label").text);
      while (cur_.acceptPunct("|")) {
        agg.labels.push_back(cur_.expectIdent("label").text);
      }
      cur_.expectPunct(";");
      ast.aggregates.push_back(std::move(agg));
      return;
    }
    if (!cur_.acceptPunct(":")) cur_.fail({"':'", "':='"});
    EventDecl ev;
    ev.label = label.text;
    ev.pos = label.pos;
    const Token& first = cur_.expectIdent("method name");
    if (cur_.acceptPunct("=")) {
      ev.returnBinding = first.text;
      ev.methodName = cur_.expectIdent("method name").text;
    } else {
      ev.methodName = first.text;
    }
    cur_.expectPunct("(");
    if (!cur_.peek().isPunct(")")) {
      ev.params.push_back(cur_.expectIdent("parameter").text);
      while (cur_.acceptPunct(",")) {
        ev.params.push_back(cur_.expectIdent("parameter").text);
      }
    }
    cur_.expectPunct(")");
    cur_.expectPunct(";");
    ast.events.push_back(std::move(ev));
  }

  ForbiddenDecl parseForbidden() {
    ForbiddenDecl decl;
    decl.pos = cur_.peek().pos;
    decl.methodName = cur_.expectIdent("method name").text;
    cur_.expectPunct("(");
    if (!cur_.peek().isPunct(")")) {
      decl.paramTypes.push_back(parseType());
      while (cur_.acceptPunct(",")) decl.paramTypes.push_back(parseType());
    }
    cur_.expectPunct(")");
    if (cur_.acceptPunct("=>")) {
      decl.replacement = cur_.expectIdent("replacement label").text;
    }
    cur_.expectPunct(";");
    return decl;
  }

  // alt := seq ['|' alt]; seq := postfix [',' seq]; alternation binds
  // loosest, as in ordinary regular expressions.
  OrderExpr parseAlt(int depth) {
    checkDepth(depth);
    SourcePos pos = cur_.peek().pos;
    OrderExpr lhs = parseSeq(depth + 1);
    if (cur_.acceptPunct("|")) {
      return OrderExpr::makeBinary(OrderExpr::Kind::Alt, std::move(lhs),
                                   parseAlt(depth + 1), pos);
    }
    return lhs;
  }

  OrderExpr parseSeq(int depth) {
    checkDepth(depth);
    SourcePos pos = cur_.peek().pos;
    OrderExpr lhs = parsePostfix(depth + 1);
    if (cur_.acceptPunct(",")) {
      return OrderExpr::makeBinary(OrderExpr::Kind::Seq, std::move(lhs),
                                   parseSeq(depth + 1), pos);
    }
    return lhs;
  }

  OrderExpr parsePostfix(int depth) {
    checkDepth(depth);
    SourcePos pos = cur_.peek().pos;
    OrderExpr e = parsePrimary(depth + 1);
    for (;;) {
      if (cur_.acceptPunct("?")) {
        e = OrderExpr::makeUnary(OrderExpr::Kind::Opt, std::move(e), pos);
      } else if (cur_.acceptPunct("*")) {
        e = OrderExpr::makeUnary(OrderExpr::Kind::Star, std::move(e), pos);
      } else if (cur_.acceptPunct("+")) {
        e = OrderExpr::makeUnary(OrderExpr::Kind::Plus, std::move(e), pos);
      } else {
        return e;
      }
    }
  }

  OrderExpr parsePrimary(int depth) {
    checkDepth(depth);
    const Token& tok = cur_.peek();
    if (tok.isPunct("(")) {
      cur_.next();
      OrderExpr inner = parseAlt(depth + 1);
      cur_.expectPunct(")");
      return inner;
    }
    if (tok.kind == Token::Kind::Ident && sectionFor(tok) == nullptr) {
      cur_.next();
      return OrderExpr::makeRef(tok.text, tok.pos);
    }
    cur_.fail({"label", "'('"});
  }

  void checkDepth(int depth) {
    if (depth > kMaxOrderDepth) {
      cur_.failAt(cur_.peek(), "ORDER expression nested too deeply");
    }
  }

  ValueRef parseValueRef(const char* what) {
    ValueRef ref;
    ref.var = cur_.expectIdent(what).text;
    if (cur_.acceptPunct("(")) {
      ref.function = ref.var;
      ref.var = cur_.expectIdent("variable").text;
      cur_.expectPunct(")");
    }
    return ref;
  }

  Constant parseConstant() {
    const Token& tok = cur_.peek();
    if (tok.kind == Token::Kind::String) {
      cur_.next();
      return Constant::ofString(tok.text);
    }
    bool negative = cur_.acceptPunct("-");
    const Token& num = cur_.peek();
    if (num.kind != Token::Kind::Integer) {
      cur_.fail(negative ? std::set<std::string>{"integer"}
                         : std::set<std::string>{"string", "integer"});
    }
    cur_.next();
    return Constant::ofInteger(negative ? -num.integer : num.integer);
  }

  ConstraintExpr parseConstraint(int depth = 0) {
    checkDepth(depth);
    ConstraintExpr c;
    c.pos = cur_.peek().pos;
    c.kind = ConstraintExpr::Kind::Membership;
    c.subject = parseValueRef("variable");
    cur_.expectIdentText("in");
    cur_.expectPunct("{");
    c.values.push_back(parseConstant());
    while (cur_.acceptPunct(",")) c.values.push_back(parseConstant());
    cur_.expectPunct("}");
    if (cur_.acceptPunct("=>")) {
      ConstraintExpr impl;
      impl.kind = ConstraintExpr::Kind::Implication;
      impl.pos = c.pos;
      impl.operands.push_back(std::move(c));
      impl.operands.push_back(parseConstraint(depth + 1));
      return impl;
    }
    return c;
  }

  PredicateClause parsePredicate() {
    PredicateClause clause;
    const Token& name = cur_.expectIdent("predicate name");
    clause.name = name.text;
    clause.pos = name.pos;
    cur_.expectPunct("[");
    if (!cur_.peek().isPunct("]")) {
      clause.args.push_back(parseValueRef("argument"));
      while (cur_.acceptPunct(",")) {
        clause.args.push_back(parseValueRef("argument"));
      }
    }
    cur_.expectPunct("]");
    if (cur_.acceptIdent("after")) {
      clause.afterAnchor = cur_.expectIdent("label").text;
    }
    cur_.expectPunct(";");
    return clause;
  }

  TokenCursor cur_;
};

int precedence(OrderExpr::Kind kind) {
  switch (kind) {
    case OrderExpr::Kind::Alt: return 0;
    case OrderExpr::Kind::Seq: return 1;
    case OrderExpr::Kind::Opt:
    case OrderExpr::Kind::Star:
    case OrderExpr::Kind::Plus: return 2;
    case OrderExpr::Kind::Ref: return 3;
  }
  return 3;
}

std::string printOrder(const OrderExpr& e) {
  auto wrap = [](const OrderExpr& child, bool parens) {
    std::string s = printOrder(child);
    return parens ? "(" + s + ")" : s;
  };
  int p = precedence(e.kind);
  switch (e.kind) {
    case OrderExpr::Kind::Ref: return e.ref;
    case OrderExpr::Kind::Seq:
    case OrderExpr::Kind::Alt: {
      const char* op = e.kind == OrderExpr::Kind::Seq ? ", " : " | ";
      return wrap(e.children[0], precedence(e.children[0].kind) <= p) + op +
             wrap(e.children[1], precedence(e.children[1].kind) < p);
    }
    case OrderExpr::Kind::Opt:
      return wrap(e.children[0], precedence(e.children[0].kind) < p) + "?";
    case OrderExpr::Kind::Star:
      return wrap(e.children[0], precedence(e.children[0].kind) < p) + "*";
    case OrderExpr::Kind::Plus:
      return wrap(e.children[0], precedence(e.children[0].kind) < p) + "+";
  }
  return {};
}

std::string joinComma(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

RuleAst parseRule(const RuleSource& src) {
  try {
    RuleParser parser(tokenize(src.text));
    RuleAst ast = parser.parse();
    ast.file = src.path;
    return ast;
  } catch (const Error& e) {
    if (!e.file().empty()) throw;
    throw e.withFile(src.path);
  }
}

std::string prettyPrint(const RuleAst& ast) {
  std::ostringstream out;
  out << "SPEC " << ast.specType << "\n\nOBJECTS\n";
  for (const auto& o : ast.objects) out << "  " << o.type << ' ' << o.name << ";\n";
  out << "\nEVENTS\n";
  for (const auto& e : ast.events) {
    out << "  " << e.label << ": ";
    if (e.returnBinding) out << *e.returnBinding << " = ";
    out << e.methodName << '(' << joinComma(e.params) << ");\n";
  }
  for (const auto& a : ast.aggregates) {
    out << "  " << a.name << " := ";
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (i) out << " | ";
      out << a.labels[i];
    }
    out << ";\n";
  }
  if (!ast.forbidden.empty()) {
    out << "\nFORBIDDEN\n";
    for (const auto& f : ast.forbidden) {
      out << "  " << f.methodName << '(' << joinComma(f.paramTypes) << ')';
      if (f.replacement) out << " => " << *f.replacement;
      out << ";\n";
    }
  }
  out << "\nORDER\n  " << printOrder(ast.order) << "\n";
  out << "\nCONSTRAINTS\n";
  for (const auto& c : ast.constraints) out << "  " << c.spelling() << ";\n";
  auto clauses = [&out](const char* keyword,
                        const std::vector<PredicateClause>& list,
                        bool always) {
    if (list.empty() && !always) return;
    out << '\n' << keyword << '\n';
    for (const auto& p : list) out << "  " << p.spelling() << ";\n";
  };
  clauses("REQUIRES", ast.requirements, false);
  clauses("ENSURES", ast.ensures, true);
  clauses("NEGATES", ast.negates, false);
  return out.str();
}

}  // namespace crysl::frontend
