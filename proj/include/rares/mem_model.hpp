#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rares/common.hpp"
#include "rares/registers.hpp"

namespace rares {

enum class RegionKind : std::uint8_t {
  BootRom,
  KeyRom,
  RecoveryRom,
  Flash,
  AppRam,
  ReservedStack,
  Metadata,
};

inline constexpr std::size_t kRegionCount = 7;

inline constexpr std::array<RegionKind, kRegionCount> kAllRegionKinds = {
    RegionKind::BootRom, RegionKind::KeyRom,        RegionKind::RecoveryRom, RegionKind::Flash,
    RegionKind::AppRam,  RegionKind::ReservedStack, RegionKind::Metadata,
};

constexpr std::size_t region_index(RegionKind kind) { return static_cast<std::size_t>(kind); }

constexpr bool is_rom(RegionKind kind) {
  return kind == RegionKind::BootRom || kind == RegionKind::KeyRom ||
         kind == RegionKind::RecoveryRom;
}

std::string_view region_name(RegionKind kind);
std::optional<RegionKind> region_from_name(std::string_view name);

inline constexpr std::size_t kKeySize = 32;

/// Inclusive address range [start, end] owned by one region.
struct Region {
  RegionKind kind;
  Addr start;
  Addr end;

  constexpr std::size_t size() const { return static_cast<std::size_t>(end) - start + 1; }
  constexpr bool contains(Addr addr) const { return addr >= start && addr <= end; }
  friend constexpr bool operator==(const Region&, const Region&) = default;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};
class OverlapError : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class MissingRegion : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class DuplicateRegion : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class InvertedRegion : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class KeyRomSizeError : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class MetadataSizeError : public LayoutError {
 public:
  using LayoutError::LayoutError;
};
class UnmappedAddress : public Error {
 public:
  using Error::Error;
};

/// Validated region map. Every RegionKind appears exactly once and no two
/// regions overlap.
class MemoryLayout {
 public:
  static MemoryLayout build(std::span<const Region> regions);
  static MemoryLayout defaults();

  const Region& region(RegionKind kind) const { return by_kind_[region_index(kind)]; }
  std::span<const Region> regions() const { return by_kind_; }

  /// Binary search over the start-sorted regions; nullopt for unmapped addresses.
  std::optional<RegionKind> classify(Addr addr) const;
  bool contains(RegionKind kind, Addr addr) const { return region(kind).contains(addr); }

  friend bool operator==(const MemoryLayout&, const MemoryLayout&) = default;

 private:
  MemoryLayout() = default;

  std::array<Region, kRegionCount> by_kind_{};
  std::array<Region, kRegionCount> by_start_{};
};

inline MemoryLayout build_layout(std::span<const Region> regions) {
  return MemoryLayout::build(regions);
}

inline std::optional<RegionKind> classify_addr(const MemoryLayout& layout, Addr addr) {
  return layout.classify(addr);
}

/// Byte offsets of the Ctrl_register image and EXEC flag inside Metadata.
inline constexpr std::size_t kMetaCtrlOffset = 0;
inline constexpr std::size_t kMetaExecOffset = 2;

/// Complete mutable state of one simulated device.
struct DeviceState {
  explicit DeviceState(MemoryLayout l);

  MemoryLayout layout;
  std::array<Bytes, kRegionCount> mem;
  CtrlRegister ctrl;
  ModeRegister r2;
  bool cpu_halted = false;
  bool chip_gate_active = false;
  bool reset_pending = false;
  bool recovery_pending = false;
  /// Set by a failed secure boot; the device never enters normal operation.
  bool boot_failed = false;
  ExecMetadata exec_meta;
  std::uint64_t cycle = 0;
  /// Expected HMAC of the golden image, provisioned into APEX metadata.
  Digest reference_digest{};

  std::span<Byte> bytes(RegionKind kind) { return mem[region_index(kind)]; }
  std::span<const Byte> bytes(RegionKind kind) const { return mem[region_index(kind)]; }

  /// Unmapped addresses read as 0x00.
  Byte read(Addr addr) const;
  /// Copy of [start, end]; every address must be mapped into one region.
  Bytes read_range(Addr start, Addr end) const;

  std::span<const Byte> key() const { return bytes(RegionKind::KeyRom); }
  /// The recovery image: the first Flash-size bytes of RecoveryRom.
  std::span<const Byte> golden_bytes() const;

  /// True when the CPU cannot issue accesses (hardware CPUOFF or a mode bit).
  bool cpu_stopped() const { return cpu_halted || r2.cpu_off(); }

  /// Writes the Ctrl_register image (little-endian) and EXEC flag into Metadata.
  void sync_metadata();

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

/// Golden image used at provisioning time.
struct GoldenImage {
  Bytes bytes;
  Digest reference_digest{};
};

enum class WriteOutcome { Applied, Suppressed };

std::string_view write_outcome_name(WriteOutcome outcome);

/// Stores one byte unless the chip-enable gate is raised or the target is a
/// ROM. Throws UnmappedAddress for addresses outside every region.
WriteOutcome apply_write(DeviceState& state, Addr addr, Byte value);

}  // namespace rares
