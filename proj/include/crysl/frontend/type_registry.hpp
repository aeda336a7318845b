#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace crysl::frontend {

enum class ValueKind { String, Integer, Boolean, Other };

const char* toString(ValueKind kind);

// Known type names for a ruleset, read from a `types.manifest`:
//
//   # comment
//   java.lang.String
//   javax.crypto.SecretKey extends java.security.Key
//
// Primitive types and java.lang.String are always known. An array type
// "T[]" is known when T is.
class TypeRegistry {
 public:
  TypeRegistry();

  // Throws Error(Syntax) with a line position on malformed lines.
  static TypeRegistry parseManifest(std::string_view text,
                                    const std::string& path = "types.manifest");

  void add(const std::string& type);
  void addSupertype(const std::string& type, const std::string& supertype);
  void merge(const TypeRegistry& other);

  bool isKnown(std::string_view type) const;
  // Reflexive, transitive.
  bool isSubtype(std::string_view sub, std::string_view super) const;

  // True when a value of static type `actual` may be passed where `declared`
  // is expected. Empty strings stand for "unknown" and are compatible with
  // everything.
  bool compatible(std::string_view declared, std::string_view actual) const;

  const std::set<std::string>& types() const { return types_; }

  static ValueKind kindOf(std::string_view type);
  static bool isPrimitive(std::string_view type);

 private:
  std::set<std::string> types_;
  std::map<std::string, std::set<std::string>> supertypes_;
};

}  // namespace crysl::frontend
