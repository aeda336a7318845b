#include "crysl/frontend/type_registry.hpp"

#include <sstream>
#include <vector>

#include "crysl/error.hpp"

namespace crysl::frontend {

namespace {

constexpr std::string_view kPrimitives[] = {
    "int", "long", "short", "byte", "char", "boolean", "float", "double"};

bool isQualifiedName(std::string_view s) {
  if (s.empty()) return false;
  bool segmentStart = true;
  for (char c : s) {
    if (c == '.') {
      if (segmentStart) return false;
      segmentStart = true;
      continue;
    }
    bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                 c == '_' || c == '$';
    bool digit = c >= '0' && c <= '9';
    if (segmentStart && !alpha) return false;
    if (!alpha && !digit) return false;
    segmentStart = false;
  }
  return !segmentStart;
}

std::string_view stripArray(std::string_view type) {
  while (type.size() >= 2 && type.substr(type.size() - 2) == "[]") {
    type.remove_suffix(2);
  }
  return type;
}

}  // namespace

const char* toString(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Integer: return "integer";
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Other: return "object";
  }
  return "object";
}

TypeRegistry::TypeRegistry() {
  for (auto p : kPrimitives) types_.emplace(p);
  types_.emplace("java.lang.String");
  types_.emplace("java.lang.Object");
}

TypeRegistry TypeRegistry::parseManifest(std::string_view text,
                                         const std::string& path) {
  TypeRegistry reg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> parts;
    for (std::string w; words >> w;) parts.push_back(w);
    if (parts.empty()) continue;
    auto bad = [&](const std::string& msg) {
      return Error(ErrorKind::Syntax, msg, {lineNo, 1}, path);
    };
    if (!isQualifiedName(stripArray(parts[0]))) {
      throw bad("malformed type name '" + parts[0] + "'");
    }
    reg.add(parts[0]);
    if (parts.size() == 1) continue;
    if (parts[1] != "extends" || parts.size() < 3) {
      throw bad("expected 'extends <type>[, <type>...]' after type name");
    }
    std::string rest;
    for (std::size_t i = 2; i < parts.size(); ++i) rest += parts[i];
    std::stringstream supers(rest);
    for (std::string s; std::getline(supers, s, ',');) {
      if (!isQualifiedName(s)) throw bad("malformed supertype '" + s + "'");
      reg.add(s);
      reg.addSupertype(parts[0], s);
    }
  }
  return reg;
}

void TypeRegistry::add(const std::string& type) { types_.insert(type); }

void TypeRegistry::addSupertype(const std::string& type,
                                const std::string& supertype) {
  supertypes_[type].insert(supertype);
}

void TypeRegistry::merge(const TypeRegistry& other) {
  types_.insert(other.types_.begin(), other.types_.end());
  for (const auto& [t, supers] : other.supertypes_) {
    supertypes_[t].insert(supers.begin(), supers.end());
  }
}

bool TypeRegistry::isKnown(std::string_view type) const {
  return types_.count(std::string(stripArray(type))) > 0;
}

bool TypeRegistry::isSubtype(std::string_view sub,
                             std::string_view super) const {
  if (sub == super) return true;
  if (super == "java.lang.Object" && !isPrimitive(sub)) return true;
  std::set<std::string> seen;
  std::vector<std::string> work{std::string(sub)};
  while (!work.empty()) {
    std::string t = std::move(work.back());
    work.pop_back();
    if (!seen.insert(t).second) continue;
    auto it = supertypes_.find(t);
    if (it == supertypes_.end()) continue;
    for (const auto& s : it->second) {
      if (s == super) return true;
      work.push_back(s);
    }
  }
  return false;
}

bool TypeRegistry::compatible(std::string_view declared,
                              std::string_view actual) const {
  if (declared.empty() || actual.empty()) return true;
  if (declared == actual) return true;
  ValueKind dk = kindOf(declared);
  if (dk == ValueKind::Integer && kindOf(actual) == ValueKind::Integer) {
    return true;
  }
  return isSubtype(actual, declared);
}

ValueKind TypeRegistry::kindOf(std::string_view type) {
  if (type == "java.lang.String" || type == "String") return ValueKind::String;
  if (type == "int" || type == "long" || type == "short" || type == "byte") {
    return ValueKind::Integer;
  }
  if (type == "boolean") return ValueKind::Boolean;
  return ValueKind::Other;
}

bool TypeRegistry::isPrimitive(std::string_view type) {
  for (auto p : kPrimitives) {
    if (type == p) return true;
  }
  return false;
}

}  // namespace crysl::frontend
