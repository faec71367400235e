#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace darwinnet {

// FNV-1a, 64-bit. Not a cryptographic hash.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t offset_basis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t prime = 0x100000001b3ULL;

  Fnv1a64& update(std::span<const std::uint8_t> bytes) {
    for (std::uint8_t b : bytes) {
      state_ ^= b;
      state_ *= prime;
    }
    return *this;
  }

  Fnv1a64& update(std::string_view s) {
    return update({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = offset_basis;
};

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  return Fnv1a64{}.update(bytes).digest();
}

inline std::uint64_t fnv1a64(std::string_view s) { return Fnv1a64{}.update(s).digest(); }

inline void append_le64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::string to_hex16(std::uint64_t v);

}  // namespace darwinnet
