#include "rares/prevention.hpp"

#include <algorithm>
#include <charconv>

namespace rares {

std::string action_name(const PreventionAction& action) {
  switch (action.type) {
    case ActionType::PassThrough: return "PassThrough";
    case ActionType::SoftModeSwitch: return "SoftModeSwitch:" + hex16(action.mask);
    case ActionType::HardCpuOff: return "HardCpuOff";
    case ActionType::ChipGateAndRecover: return "ChipGateAndRecover";
    case ActionType::SystemReset: return "SystemReset";
  }
  return "?";
}

std::optional<PreventionAction> parse_action(std::string_view text) {
  if (text == "PassThrough") return PreventionAction::pass_through();
  if (text == "HardCpuOff") return PreventionAction::hard_cpu_off();
  if (text == "ChipGateAndRecover") return PreventionAction::chip_gate_and_recover();
  if (text == "SystemReset") return PreventionAction::system_reset();

  constexpr std::string_view kSoft = "SoftModeSwitch";
  if (text == kSoft) return PreventionAction::soft_mode_switch(prevention::kLowPowerMask);
  if (text.starts_with(kSoft) && text.size() > kSoft.size() && text[kSoft.size()] == ':') {
    std::string_view mask = text.substr(kSoft.size() + 1);
    int base = 10;
    if (mask.starts_with("0x") || mask.starts_with("0X")) {
      mask.remove_prefix(2);
      base = 16;
    }
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(mask.data(), mask.data() + mask.size(), value, base);
    if (ec != std::errc{} || ptr != mask.data() + mask.size() || mask.empty() || value > 0xFFFF) {
      return std::nullopt;
    }
    return PreventionAction::soft_mode_switch(static_cast<std::uint16_t>(value));
  }
  return std::nullopt;
}

namespace prevention {

PreventionBinding default_binding() {
  PreventionBinding binding;
  for (ViolationKind kind : kAllViolationKinds) {
    binding.bind(kind, PreventionAction::chip_gate_and_recover());
  }
  binding.bind(ViolationKind::CpuRomRd, PreventionAction::hard_cpu_off());
  binding.bind(ViolationKind::IrqRam, PreventionAction::system_reset());
  binding.bind(ViolationKind::IrqStack, PreventionAction::system_reset());
  return binding;
}

ModeRegister mode_switch(ModeRegister r2, std::uint16_t mask) {
  return ModeRegister{static_cast<std::uint16_t>(r2.bits | mask)};
}

bool ctrl_cen_sel(std::uint16_t ctrl) {
  constexpr std::uint16_t kMemoryAccessBits = 0x03FC;  // D2..D9
  return (ctrl & kMemoryAccessBits) != 0;
}

std::vector<ActionRecord> apply(DeviceState& state, ViolationSet violations,
                                const PreventionBinding& binding) {
  std::vector<ActionRecord> records;
  for (ViolationKind kind : violations.kinds()) {
    const PreventionAction& action = binding.at(kind);
    if (action.type == ActionType::PassThrough) continue;
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const ActionRecord& r) { return r.action == action; });
    if (it == records.end()) {
      records.push_back({action, ViolationSet{}, false});
      it = records.end() - 1;
    }
    it->triggers.insert(kind);
  }
  if (records.empty()) return records;

  std::sort(records.begin(), records.end(), [](const ActionRecord& a, const ActionRecord& b) {
    if (a.action.type != b.action.type) return precedence(a.action.type) > precedence(b.action.type);
    return a.action.mask < b.action.mask;
  });

  const ActionType strongest = records.front().action.type;
  for (ActionRecord& record : records) {
    if (record.action.type != strongest) continue;
    record.applied = true;
    switch (record.action.type) {
      case ActionType::SoftModeSwitch:
        state.r2 = mode_switch(state.r2, record.action.mask);
        break;
      case ActionType::HardCpuOff:
        state.cpu_halted = true;
        break;
      case ActionType::ChipGateAndRecover:
        state.chip_gate_active = true;
        state.recovery_pending = true;
        break;
      case ActionType::SystemReset:
        state.reset_pending = true;
        state.ctrl.raise_reset();
        break;
      case ActionType::PassThrough:
        break;
    }
  }
  state.sync_metadata();
  return records;
}

}  // namespace prevention
}  // namespace rares
