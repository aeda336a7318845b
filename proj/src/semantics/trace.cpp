#include "crysl/semantics/trace.hpp"

#include <fstream>
#include <sstream>

#include "crysl/lex.hpp"

namespace crysl::semantics {

std::string MethodSig::spelling() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < paramTypes.size(); ++i) {
    if (i) out += ",";
    out += paramTypes[i];
  }
  return out + ")";
}

const RuntimeValue* Event::base() const {
  auto it = env.find(kThisVar);
  if (it == env.end() || !it->second.isObject()) return nullptr;
  return &it->second;
}

namespace {

std::string parseType(TokenCursor& cur) {
  std::string type = cur.expectIdent("type name").text;
  while (cur.acceptPunct(".")) type += "." + cur.expectIdent("type name").text;
  while (cur.peek().isPunct("[")) {
    cur.next();
    cur.expectPunct("]");
    type += "[]";
  }
  return type;
}

RuntimeValue parseValue(TokenCursor& cur) {
  const Token& tok = cur.peek();
  if (tok.kind == Token::Kind::String) {
    return RuntimeValue::ofString(cur.next().text);
  }
  if (tok.kind == Token::Kind::Integer) {
    return RuntimeValue::ofInt(cur.next().integer);
  }
  if (tok.isPunct("-") && cur.peek(1).kind == Token::Kind::Integer) {
    cur.next();
    return RuntimeValue::ofInt(-cur.next().integer);
  }
  if (cur.acceptPunct("@")) {
    std::string id = cur.expectIdent("object id").text;
    std::string type;
    if (cur.acceptPunct(":")) type = parseType(cur);
    return RuntimeValue::ofObject(id, type);
  }
  cur.fail({"string", "integer", "'@'"});
}

Event parseEvent(TokenCursor& cur) {
  Event ev;
  std::string baseId;
  if (!cur.acceptPunct("-")) baseId = cur.expectIdent("object id or '-'").text;
  ev.typeName = parseType(cur);
  ev.sig.name = cur.expectIdent("method name").text;
  cur.expectPunct("(");
  if (!cur.acceptPunct(")")) {
    do {
      ev.sig.paramTypes.push_back(parseType(cur));
    } while (cur.acceptPunct(","));
    cur.expectPunct(")");
  }
  cur.expectPunct("{");
  if (!cur.acceptPunct("}")) {
    do {
      const Token& name = cur.expectIdent("variable name");
      if (name.text == kThisVar) cur.failAt(name, "'this' is implied by the base object");
      cur.expectPunct("=");
      if (!ev.env.emplace(name.text, parseValue(cur)).second) {
        cur.failAt(name, "variable '" + name.text + "' bound twice");
      }
    } while (cur.acceptPunct(","));
    cur.expectPunct("}");
  }
  if (cur.acceptIdent("ret")) {
    cur.expectPunct("=");
    const Token& ret = cur.expectIdent("object id");
    if (!baseId.empty()) cur.failAt(ret, "'ret' requires '-' as the base");
    baseId = ret.text;
    ev.staticFactory = true;
  }
  if (!cur.atEnd()) cur.fail({"end of line"});
  if (!baseId.empty()) {
    ev.env[kThisVar] = RuntimeValue::ofObject(baseId, ev.typeName);
  }
  return ev;
}

}  // namespace

RuntimeTrace parseTrace(std::string_view text, const std::string& path) {
  RuntimeTrace trace;
  std::size_t start = 0;
  int lineNo = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    try {
      TokenCursor cur(tokenize(line));
      Event ev = parseEvent(cur);
      ev.line = lineNo;
      trace.events.push_back(std::move(ev));
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), {lineNo, e.pos().column}, path,
                  e.expected());
    }
  }

  std::map<std::string, std::string> typeOfId;
  for (const auto& ev : trace.events) {
    if (const auto* b = ev.base()) typeOfId.emplace(b->objectId(), b->type());
  }
  for (auto& ev : trace.events) {
    for (auto& [var, value] : ev.env) {
      if (value.isObject() && value.type().empty()) {
        auto it = typeOfId.find(value.objectId());
        if (it != typeOfId.end()) {
          value = RuntimeValue::ofObject(value.objectId(), it->second);
        }
      }
    }
  }
  return trace;
}

RuntimeTrace readTraceFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read trace file", {}, path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parseTrace(text.str(), path.string());
}

std::string writeTrace(const RuntimeTrace& trace) {
  std::string out;
  for (const auto& ev : trace.events) {
    const RuntimeValue* base = ev.base();
    out += base && !ev.staticFactory ? base->objectId() : "-";
    out += " " + ev.typeName + " " + ev.sig.spelling() + " {";
    bool first = true;
    for (const auto& [var, value] : ev.env) {
      if (var == kThisVar) continue;
      if (!first) out += ", ";
      first = false;
      out += var + "=" + value.spelling();
    }
    out += "}";
    if (base && ev.staticFactory) out += " ret=" + base->objectId();
    out += "\n";
  }
  return out;
}

}  // namespace crysl::semantics
