#include "crysl/fingerprint.hpp"

#include <cstdio>

namespace crysl {

Fingerprint& Fingerprint::add(std::string_view bytes) {
  for (unsigned char c : bytes) {
    hash_ ^= c;
    hash_ *= 0x100000001b3ULL;
  }
  return *this;
}

std::string Fingerprint::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

std::string fingerprint(std::string_view bytes) { return Fingerprint().add(bytes).hex(); }

}  // namespace crysl
