#pragma once

// Small register-level value types shared by the device model, the detector,
// the prevention engine and the proof-of-execution tracker.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rares/common.hpp"

namespace rares {

/// The ten detectable violation classes. The enumerator value is the
/// Ctrl_register bit index that latches it (D0..D9).
enum class ViolationKind : std::uint8_t {
  IrqRam = 0,      // D0  interrupt while executing from application RAM
  IrqStack = 1,    // D1  interrupt while executing SW-Att
  DmaRamWr = 2,    // D2
  DmaRamRd = 3,    // D3
  DmaStackRd = 4,  // D4
  DmaRomRd = 5,    // D5
  CpuRamWr = 6,    // D6
  CpuRamRd = 7,    // D7
  CpuStackRd = 8,  // D8
  CpuRomRd = 9,    // D9
};

inline constexpr std::size_t kViolationKindCount = 10;

inline constexpr std::array<ViolationKind, kViolationKindCount> kAllViolationKinds = {
    ViolationKind::IrqRam,     ViolationKind::IrqStack,   ViolationKind::DmaRamWr,
    ViolationKind::DmaRamRd,   ViolationKind::DmaStackRd, ViolationKind::DmaRomRd,
    ViolationKind::CpuRamWr,   ViolationKind::CpuRamRd,   ViolationKind::CpuStackRd,
    ViolationKind::CpuRomRd,
};

constexpr unsigned bit_index(ViolationKind kind) { return static_cast<unsigned>(kind); }
constexpr std::uint16_t bit_of(ViolationKind kind) {
  return static_cast<std::uint16_t>(1u << bit_index(kind));
}

/// Canonical upper-case name, e.g. "CPU_ROM_RD".
std::string_view kind_name(ViolationKind kind);
std::optional<ViolationKind> kind_from_name(std::string_view name);

/// A set of violation kinds, stored as its D0..D9 bit mask.
class ViolationSet {
 public:
  constexpr ViolationSet() = default;
  constexpr explicit ViolationSet(std::uint16_t mask) : mask_(mask & kMask) {}

  constexpr void insert(ViolationKind kind) { mask_ |= bit_of(kind); }
  constexpr bool contains(ViolationKind kind) const { return (mask_ & bit_of(kind)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint16_t mask() const { return mask_; }
  std::size_t size() const;
  std::vector<ViolationKind> kinds() const;

  constexpr ViolationSet& operator|=(ViolationSet other) {
    mask_ |= other.mask_;
    return *this;
  }
  friend constexpr bool operator==(ViolationSet, ViolationSet) = default;

  static constexpr std::uint16_t kMask = 0x03FF;

 private:
  std::uint16_t mask_ = 0;
};

/// The 16-bit hardware detection register.
///
/// D0..D9 are sticky violation flags, D10 is the reset trigger, D11..D15 are
/// reserved and never set. The mutators model hardware wiring; software only
/// ever reaches the register through detector::software_read_ctrl and
/// detector::software_write_ctrl.
class CtrlRegister {
 public:
  static constexpr std::uint16_t kDetectMask = 0x03FF;
  static constexpr std::uint16_t kResetBit = 0x0400;
  static constexpr std::uint16_t kReservedMask = 0xF800;

  constexpr std::uint16_t value() const { return value_; }
  constexpr ViolationSet detected() const { return ViolationSet(value_); }
  constexpr bool reset_raised() const { return (value_ & kResetBit) != 0; }

  constexpr void latch(ViolationSet kinds) { value_ |= kinds.mask(); }
  constexpr void raise_reset() { value_ |= kResetBit; }
  constexpr void clear_detection() { value_ &= static_cast<std::uint16_t>(~kDetectMask); }
  constexpr void clear_all() { value_ = 0; }

  friend constexpr bool operator==(CtrlRegister, CtrlRegister) = default;

 private:
  std::uint16_t value_ = 0;
};

/// "0x0240 [DMA_RAM_WR|CPU_RAM_WR]"; D10 renders as RESET.
std::string describe_ctrl(std::uint16_t value);

/// Named low-power modes of the MSP430 status register.
enum class PowerMode { Active, Lpm0, Lpm1, Lpm2, Lpm3, Lpm4 };

std::string_view power_mode_name(PowerMode mode);

/// The r2 status register; only the mode bits matter here.
struct ModeRegister {
  static constexpr std::uint16_t kGie = 1u << 3;
  static constexpr std::uint16_t kCpuOff = 1u << 4;
  static constexpr std::uint16_t kOscOff = 1u << 5;
  static constexpr std::uint16_t kScg0 = 1u << 6;
  static constexpr std::uint16_t kScg1 = 1u << 7;

  std::uint16_t bits = 0;

  constexpr bool cpu_off() const { return (bits & kCpuOff) != 0; }
  PowerMode mode() const;

  friend constexpr bool operator==(ModeRegister, ModeRegister) = default;
};

/// Proof-of-execution metadata for one executable region [er_min, er_max].
struct ExecMetadata {
  Addr er_min = 0;
  Addr er_max = 0;
  bool exec_flag = false;
  bool armed = false;
  /// Set on the first breach inside the armed window; cleared by pox_begin.
  bool breached = false;

  friend bool operator==(const ExecMetadata&, const ExecMetadata&) = default;
};

}  // namespace rares
