#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace doa {

/// Incremental 64-bit FNV-1a. Stable across platforms; used for digests and
/// component fingerprints.
class Fnv1a {
 public:
  Fnv1a& add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001B3ULL;
    }
    return *this;
  }

  std::uint64_t value() const { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

inline std::string fnv1a_hex(std::string_view bytes) { return Fnv1a{}.add(bytes).hex(); }

}  // namespace doa
