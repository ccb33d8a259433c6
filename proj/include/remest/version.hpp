#ifndef REMEST_VERSION_HPP
#define REMEST_VERSION_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace remest {

inline constexpr std::string_view kVersion = "0.1.0";

/// FNV-1a 64-bit; stable across platforms, used to stamp outputs with a
/// fingerprint of the configuration that produced them.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hash_hex(std::string_view s) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace remest

#endif
