#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crysl/semantics/value.hpp"

namespace crysl::semantics {

inline constexpr const char* kThisVar = "this";

struct MethodSig {
  std::string name;
  std::vector<std::string> paramTypes;

  std::string spelling() const;  // "init(int,java.security.Key)"
  friend bool operator==(const MethodSig&, const MethodSig&) = default;
};

// One observed call. `env` maps rule variables to the values the call bound
// and holds "this" when the event has a base object.
struct Event {
  std::string typeName;  // class declaring the method
  MethodSig sig;
  std::map<std::string, RuntimeValue> env;
  bool staticFactory = false;  // "this" is the returned object
  int line = 0;                // where the event came from; not compared

  const RuntimeValue* base() const;

  friend bool operator==(const Event& a, const Event& b) {
    return a.typeName == b.typeName && a.sig == b.sig && a.env == b.env &&
           a.staticFactory == b.staticFactory;
  }
};

struct RuntimeTrace {
  std::vector<Event> events;
};

// Line-oriented text form, one event per line:
//
//   # comment
//   kg javax.crypto.KeyGenerator init(int) {keySize=128}
//   -  javax.crypto.KeyGenerator getInstance(java.lang.String) {algorithm="AES"} ret=kg
//   c  javax.crypto.Cipher init(int,java.security.Key) {encmode=1, key=@k1:javax.crypto.SecretKey}
//
// The first field is the base object id, or "-" for a call without one;
// "ret=id" makes the returned object the base of a static factory call.
// Object values are "@id" or "@id:Type"; an untyped reference takes the type
// of the events that id is the base of. See docs/trace-format.md.
RuntimeTrace parseTrace(std::string_view text,
                        const std::string& path = "<trace>");
RuntimeTrace readTraceFile(const std::filesystem::path& path);
std::string writeTrace(const RuntimeTrace& trace);

}  // namespace crysl::semantics
