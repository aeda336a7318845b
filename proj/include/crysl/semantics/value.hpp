#pragma once

#include <compare>
#include <string>

namespace crysl::semantics {

// A value bound to a rule variable: a string, an integer, an object
// identity, or Unknown (a value the static layer could not determine).
class RuntimeValue {
 public:
  enum class Kind { String, Int, Object, Unknown };

  RuntimeValue() = default;

  static RuntimeValue ofString(std::string s);
  static RuntimeValue ofInt(long long v);
  static RuntimeValue ofObject(std::string id, std::string type = {});
  static RuntimeValue unknown();

  Kind kind() const { return kind_; }
  bool isString() const { return kind_ == Kind::String; }
  bool isInt() const { return kind_ == Kind::Int; }
  bool isObject() const { return kind_ == Kind::Object; }
  bool isUnknown() const { return kind_ == Kind::Unknown; }

  const std::string& text() const { return text_; }      // String
  long long integer() const { return integer_; }        // Int
  const std::string& objectId() const { return text_; }  // Object
  const std::string& type() const { return type_; }      // Object, may be ""

  // "\"AES\"", "128", "@o1:javax.crypto.KeyGenerator", "?"
  std::string spelling() const;

  // Objects compare by identity only; the recorded type is not part of it.
  friend bool operator==(const RuntimeValue& a, const RuntimeValue& b);
  friend std::strong_ordering operator<=>(const RuntimeValue& a,
                                          const RuntimeValue& b);

 private:
  Kind kind_ = Kind::Unknown;
  std::string text_;
  long long integer_ = 0;
  std::string type_;
};

}  // namespace crysl::semantics
