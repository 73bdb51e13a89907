#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rares/mem_model.hpp"
#include "rares/registers.hpp"

namespace rares {

enum class ActionType : std::uint8_t {
  PassThrough,         // detect only
  SoftModeSwitch,      // software `bis #mask, r2`
  HardCpuOff,          // D9 ORed into the CPUOFF selection logic
  ChipGateAndRecover,  // ctrl_cen_sel wait states, then golden-image reflash
  SystemReset,         // raises D10
};

/// Higher value wins when several actions fire in the same cycle.
constexpr int precedence(ActionType type) { return static_cast<int>(type); }

struct PreventionAction {
  ActionType type = ActionType::PassThrough;
  /// Only meaningful for SoftModeSwitch.
  std::uint16_t mask = 0;

  static constexpr PreventionAction pass_through() { return {ActionType::PassThrough, 0}; }
  static constexpr PreventionAction soft_mode_switch(std::uint16_t m) {
    return {ActionType::SoftModeSwitch, m};
  }
  static constexpr PreventionAction hard_cpu_off() { return {ActionType::HardCpuOff, 0}; }
  static constexpr PreventionAction chip_gate_and_recover() {
    return {ActionType::ChipGateAndRecover, 0};
  }
  static constexpr PreventionAction system_reset() { return {ActionType::SystemReset, 0}; }

  friend constexpr bool operator==(const PreventionAction&, const PreventionAction&) = default;
};

/// "HardCpuOff", "SoftModeSwitch:0x00F0", ...
std::string action_name(const PreventionAction& action);
/// Inverse of action_name; nullopt for unknown names or malformed masks.
std::optional<PreventionAction> parse_action(std::string_view text);

/// Violation kind -> prevention action, total over all ten kinds.
class PreventionBinding {
 public:
  /// Every kind bound to PassThrough.
  PreventionBinding() = default;

  const PreventionAction& at(ViolationKind kind) const { return actions_[bit_index(kind)]; }
  void bind(ViolationKind kind, PreventionAction action) { actions_[bit_index(kind)] = action; }

  friend bool operator==(const PreventionBinding&, const PreventionBinding&) = default;

 private:
  std::array<PreventionAction, kViolationKindCount> actions_{};
};

/// One bound action triggered in a cycle. Subsumed actions are logged with
/// applied == false.
struct ActionRecord {
  PreventionAction action;
  ViolationSet triggers;
  bool applied = false;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

namespace prevention {

/// The operand of the `bis #240, r2` mode switch.
inline constexpr std::uint16_t kLowPowerMask = 0x00F0;

PreventionBinding default_binding();

/// BIS semantics: r2 | mask.
ModeRegister mode_switch(ModeRegister r2, std::uint16_t mask);

/// Chip-enable gate select: OR of the memory-access violation bits D2..D9.
bool ctrl_cen_sel(std::uint16_t ctrl);
inline bool ctrl_cen_sel(const CtrlRegister& ctrl) { return ctrl_cen_sel(ctrl.value()); }

/// Applies the strongest bound action(s) for this cycle's violations.
/// Records come back ordered by descending precedence, then by mask.
std::vector<ActionRecord> apply(DeviceState& state, ViolationSet violations,
                                const PreventionBinding& binding);

}  // namespace prevention
}  // namespace rares
