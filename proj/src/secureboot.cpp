#include "rares/secureboot.hpp"

#include <algorithm>

#include "rares/hmac.hpp"

namespace rares {

std::string_view boot_outcome_name(BootOutcome outcome) {
  switch (outcome) {
    case BootOutcome::VerifiedClean: return "VerifiedClean";
    case BootOutcome::RecoveredThenVerified: return "RecoveredThenVerified";
    case BootOutcome::Unrecoverable: return "Unrecoverable";
  }
  return "?";
}

namespace secureboot {

DeviceState provision(const MemoryLayout& layout, std::span<const Byte> key,
                      std::span<const Byte> golden) {
  if (key.size() != kKeySize) {
    throw ProvisioningError("key must be 32 bytes, got " + std::to_string(key.size()));
  }
  DeviceState state(layout);
  const std::size_t flash_size = layout.region(RegionKind::Flash).size();
  if (golden.size() != flash_size) {
    throw ProvisioningError("golden image must match the Flash size (" +
                            std::to_string(flash_size) + " bytes), got " +
                            std::to_string(golden.size()));
  }
  if (layout.region(RegionKind::RecoveryRom).size() < flash_size) {
    throw ProvisioningError("RecoveryRom is smaller than Flash; golden image does not fit");
  }
  std::ranges::copy(key, state.bytes(RegionKind::KeyRom).begin());
  std::ranges::copy(golden, state.bytes(RegionKind::RecoveryRom).begin());
  std::ranges::copy(golden, state.bytes(RegionKind::Flash).begin());
  state.reference_digest = crypto::hmac_sha256(key, golden);
  state.sync_metadata();
  return state;
}

FlashCheck verify_flash(const DeviceState& state) {
  FlashCheck check;
  check.digest = crypto::hmac_sha256(state.key(), state.bytes(RegionKind::Flash));
  check.ok = crypto::constant_time_equal(check.digest, state.reference_digest);
  return check;
}

void reflash(DeviceState& state) {
  auto golden = state.golden_bytes();
  std::ranges::copy(golden, state.bytes(RegionKind::Flash).begin());
  state.ctrl.clear_detection();
  state.chip_gate_active = false;
  state.cpu_halted = false;
  state.recovery_pending = false;
  state.sync_metadata();
}

BootReport fsbl_boot(DeviceState& state) {
  BootReport report;
  auto attempt = [&] {
    const FlashCheck check = verify_flash(state);
    report.attempts.push_back({check.digest, state.reference_digest, check.ok});
    return check.ok;
  };

  if (attempt()) {
    report.outcome = BootOutcome::VerifiedClean;
  } else {
    reflash(state);
    report.outcome = attempt() ? BootOutcome::RecoveredThenVerified : BootOutcome::Unrecoverable;
  }
  state.boot_failed = report.outcome == BootOutcome::Unrecoverable;
  return report;
}

}  // namespace secureboot
}  // namespace rares
