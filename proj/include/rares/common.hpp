#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rares {

/// 16-bit flat address space of the MSP430-class target.
using Addr = std::uint16_t;
using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;

inline constexpr std::size_t kDigestSize = 32;
using Digest = std::array<Byte, kDigestSize>;

/// Root of every error thrown by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HexError : public Error {
 public:
  using Error::Error;
};

std::string to_hex(std::span<const Byte> bytes);
/// Parses an even-length hex string (no prefix, case-insensitive).
Bytes from_hex(std::string_view hex);

/// "0x0200"-style rendering used throughout the reports.
std::string hex16(std::uint16_t value);
std::string hex8(std::uint8_t value);

}  // namespace rares
