#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ciota {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of a byte span.
Digest sha256(std::span<const std::uint8_t> data);

/// Incremental variant for hashing several fragments without concatenation.
class Sha256 {
public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> data);
  Digest finish();

private:
  void* ctx_;
};

std::string to_hex(std::span<const std::uint8_t> data);

inline Digest zero_digest() { return Digest{}; }

} // namespace ciota
