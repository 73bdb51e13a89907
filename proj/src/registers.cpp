#include "rares/registers.hpp"

#include <bit>

namespace rares {

namespace {

constexpr std::array<std::string_view, kViolationKindCount> kKindNames = {
    "IRQ_RAM",      "IRQ_STACK",  "DMA_RAM_WR", "DMA_RAM_RD",   "DMA_STACK_RD",
    "DMA_ROM_RD",   "CPU_RAM_WR", "CPU_RAM_RD", "CPU_STACK_RD", "CPU_ROM_RD",
};

}  // namespace

std::string_view kind_name(ViolationKind kind) { return kKindNames[bit_index(kind)]; }

std::optional<ViolationKind> kind_from_name(std::string_view name) {
  for (ViolationKind kind : kAllViolationKinds) {
    if (kKindNames[bit_index(kind)] == name) return kind;
  }
  return std::nullopt;
}

std::size_t ViolationSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<ViolationKind> ViolationSet::kinds() const {
  std::vector<ViolationKind> out;
  for (ViolationKind kind : kAllViolationKinds) {
    if (contains(kind)) out.push_back(kind);
  }
  return out;
}

std::string describe_ctrl(std::uint16_t value) {
  std::string names;
  for (ViolationKind kind : kAllViolationKinds) {
    if (value & bit_of(kind)) {
      if (!names.empty()) names += '|';
      names += kind_name(kind);
    }
  }
  if (value & CtrlRegister::kResetBit) {
    if (!names.empty()) names += '|';
    names += "RESET";
  }
  if (value & CtrlRegister::kReservedMask) {
    if (!names.empty()) names += '|';
    names += "RESERVED";
  }
  return hex16(value) + " [" + names + "]";
}

std::string_view power_mode_name(PowerMode mode) {
  switch (mode) {
    case PowerMode::Active: return "Active";
    case PowerMode::Lpm0: return "LPM0";
    case PowerMode::Lpm1: return "LPM1";
    case PowerMode::Lpm2: return "LPM2";
    case PowerMode::Lpm3: return "LPM3";
    case PowerMode::Lpm4: return "LPM4";
  }
  return "?";
}

// Decoded from bits 4..7 only. OSCOFF with CPUOFF is treated as LPM4 whatever
// the clock-gate bits say, as on the real part.
PowerMode ModeRegister::mode() const {
  if (!cpu_off()) return PowerMode::Active;
  if (bits & kOscOff) return PowerMode::Lpm4;
  const bool scg0 = (bits & kScg0) != 0;
  const bool scg1 = (bits & kScg1) != 0;
  if (scg0 && scg1) return PowerMode::Lpm3;
  if (scg1) return PowerMode::Lpm2;
  if (scg0) return PowerMode::Lpm1;
  return PowerMode::Lpm0;
}

}  // namespace rares
