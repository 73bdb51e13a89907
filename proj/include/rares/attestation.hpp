#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <variant>

#include "rares/common.hpp"
#include "rares/detector.hpp"
#include "rares/mem_model.hpp"

namespace rares {

inline constexpr std::size_t kNonceSize = 32;
using Nonce = std::array<Byte, kNonceSize>;

/// Verifier challenge: fresh nonce plus the memory range to cover.
struct AttestRequest {
  Nonce nonce{};
  Addr region_start = 0;
  Addr region_end = 0;

  friend bool operator==(const AttestRequest&, const AttestRequest&) = default;
};

/// Prover response. exec_flag and the ER bounds travel in the clear; the tag
/// binds them together with the nonce and the region contents.
struct AttestReport {
  bool exec_flag = false;
  Addr er_min = 0;
  Addr er_max = 0;
  Digest tag{};

  friend bool operator==(const AttestReport&, const AttestReport&) = default;
};

enum class ExecPolicy { Ignore, RequireExec };

class BadBounds : public Error {
 public:
  using Error::Error;
};

class FrameError : public Error {
 public:
  using Error::Error;
};

namespace attestation {

/// Arms proof-of-execution tracking for [er_min, er_max] inside AppRam.
void pox_begin(DeviceState& state, Addr er_min, Addr er_max);

/// Feeds one cycle to the tracker. Inside an armed window any violation, any
/// interrupt or any pc outside the ER breaches the window for good. Outside a
/// window, a write into the ER revokes a previously earned EXEC flag.
void pox_observe(DeviceState& state, const AccessEvent& event, ViolationSet violations);

/// Closes the window; exec_flag is true iff the window was never breached.
void pox_end(DeviceState& state);

/// nonce(32) || er_min(2, BE) || er_max(2, BE) || exec_flag(1) || region bytes
Bytes encode_tag_input(const Nonce& nonce, Addr er_min, Addr er_max, bool exec_flag,
                       std::span<const Byte> region);

/// Throws BadBounds unless the request range lies inside one mapped region.
AttestReport attest(const DeviceState& state, const AttestRequest& request);

bool verify_report(std::span<const Byte> key, const AttestRequest& request,
                   const AttestReport& report, std::span<const Byte> expected_region,
                   ExecPolicy policy = ExecPolicy::Ignore);

// Framed exchange: length(4, BE) || type(1) || payload, where length counts
// the type byte plus the payload.
inline constexpr Byte kFrameRequest = 0x01;
inline constexpr Byte kFrameReport = 0x02;
inline constexpr std::size_t kRequestPayloadSize = kNonceSize + 4;
inline constexpr std::size_t kReportPayloadSize = 5 + kDigestSize;

Bytes encode_frame(const AttestRequest& request);
Bytes encode_frame(const AttestReport& report);

using Message = std::variant<AttestRequest, AttestReport>;

/// Decodes exactly one frame from the front of `stream` and reports how many
/// bytes it consumed. Returns nullopt when the frame is still incomplete;
/// throws FrameError on malformed content.
std::optional<Message> decode_frame(std::span<const Byte> stream, std::size_t* consumed = nullptr);

/// In-process byte pipe standing in for the prover/verifier link.
class LoopbackChannel {
 public:
  void send(std::span<const Byte> frame);
  /// Next complete message, or nullopt if none is buffered.
  std::optional<Message> receive();
  std::size_t pending_bytes() const { return buffer_.size(); }

 private:
  std::deque<Byte> buffer_;
};

}  // namespace attestation
}  // namespace rares
