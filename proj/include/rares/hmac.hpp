#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "rares/common.hpp"

namespace rares::crypto {

/// Streaming SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  static constexpr std::size_t kBlockSize = 64;

  Sha256();
  void update(std::span<const Byte> data);
  Digest finish();

 private:
  void compress(const Byte* block);

  std::array<std::uint32_t, 8> h_;
  std::array<Byte, kBlockSize> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

Digest sha256(std::span<const Byte> data);

/// HMAC-SHA256 (RFC 2104). Keys longer than the block size are hashed first.
Digest hmac_sha256(std::span<const Byte> key, std::span<const Byte> message);

/// Comparison whose running time depends only on the lengths.
bool constant_time_equal(std::span<const Byte> a, std::span<const Byte> b);

}  // namespace rares::crypto
