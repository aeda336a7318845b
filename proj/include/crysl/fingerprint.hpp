#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace crysl {

// 64-bit FNV-1a, incrementally.
class Fingerprint {
 public:
  Fingerprint& add(std::string_view bytes);
  std::uint64_t value() const { return hash_; }
  std::string hex() const;  // 16 lowercase hex digits

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string fingerprint(std::string_view bytes);

}  // namespace crysl
