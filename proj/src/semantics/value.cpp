#include "crysl/semantics/value.hpp"

namespace crysl::semantics {

namespace {

// Inverse of the tokenizer's string escapes.
std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

RuntimeValue RuntimeValue::ofString(std::string s) {
  RuntimeValue v;
  v.kind_ = Kind::String;
  v.text_ = std::move(s);
  return v;
}

RuntimeValue RuntimeValue::ofInt(long long i) {
  RuntimeValue v;
  v.kind_ = Kind::Int;
  v.integer_ = i;
  return v;
}

RuntimeValue RuntimeValue::ofObject(std::string id, std::string type) {
  RuntimeValue v;
  v.kind_ = Kind::Object;
  v.text_ = std::move(id);
  v.type_ = std::move(type);
  return v;
}

RuntimeValue RuntimeValue::unknown() { return {}; }

std::string RuntimeValue::spelling() const {
  switch (kind_) {
    case Kind::String:
      return quote(text_);
    case Kind::Int:
      return std::to_string(integer_);
    case Kind::Object:
      return "@" + text_ + (type_.empty() ? "" : ":" + type_);
    case Kind::Unknown:
      break;
  }
  return "?";
}

bool operator==(const RuntimeValue& a, const RuntimeValue& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const RuntimeValue& a, const RuntimeValue& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  switch (a.kind_) {
    case RuntimeValue::Kind::String:
    case RuntimeValue::Kind::Object:
      return a.text_ <=> b.text_;
    case RuntimeValue::Kind::Int:
      return a.integer_ <=> b.integer_;
    case RuntimeValue::Kind::Unknown:
      break;
  }
  return std::strong_ordering::equal;
}

}  // namespace crysl::semantics
