#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rares/common.hpp"
#include "rares/mem_model.hpp"

namespace rares {

enum class BootOutcome { VerifiedClean, RecoveredThenVerified, Unrecoverable };

std::string_view boot_outcome_name(BootOutcome outcome);

struct BootAttempt {
  Digest computed{};
  Digest reference{};
  bool matched = false;
};

struct BootReport {
  BootOutcome outcome = BootOutcome::Unrecoverable;
  std::vector<BootAttempt> attempts;

  std::size_t attempt_count() const { return attempts.size(); }
};

class ProvisioningError : public Error {
 public:
  using Error::Error;
};

namespace secureboot {

/// Builds a fresh device: key burned into KeyRom, golden image into the head
/// of RecoveryRom, Flash loaded with the same image and the reference digest
/// set to HMAC(key, golden).
DeviceState provision(const MemoryLayout& layout, std::span<const Byte> key,
                      std::span<const Byte> golden);

struct FlashCheck {
  bool ok = false;
  Digest digest{};
};

/// HMAC-SHA256 under the KeyRom key over the Flash bytes, lowest address
/// first, compared in constant time with the reference digest.
FlashCheck verify_flash(const DeviceState& state);

/// Restores Flash from the golden image and completes the resilience cycle:
/// D0..D9, the chip-enable gate and the CPU halt latch are cleared.
void reflash(DeviceState& state);

/// First-stage boot loader: verify, on failure reflash and verify once more.
/// An Unrecoverable outcome leaves the device with boot_failed set.
BootReport fsbl_boot(DeviceState& state);

}  // namespace secureboot
}  // namespace rares
