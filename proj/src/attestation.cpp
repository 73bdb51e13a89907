#include "rares/attestation.hpp"

#include "rares/hmac.hpp"

namespace rares::attestation {

namespace {

void put_u16(Bytes& out, Addr v) {
  out.push_back(static_cast<Byte>(v >> 8));
  out.push_back(static_cast<Byte>(v & 0xFF));
}

Addr get_u16(std::span<const Byte> in, std::size_t at) {
  return static_cast<Addr>((Addr{in[at]} << 8) | in[at + 1]);
}

Bytes frame(Byte type, const Bytes& payload) {
  const std::uint32_t length = static_cast<std::uint32_t>(payload.size() + 1);
  Bytes out;
  out.reserve(4 + length);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<Byte>(length >> shift));
  out.push_back(type);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

bool write_hits_er(const AccessEvent& event, const ExecMetadata& meta) {
  if (!event.wen) return false;
  const Addr target = event.target();
  return target >= meta.er_min && target <= meta.er_max;
}

}  // namespace

void pox_begin(DeviceState& state, Addr er_min, Addr er_max) {
  const Region& ram = state.layout.region(RegionKind::AppRam);
  if (er_min > er_max || !ram.contains(er_min) || !ram.contains(er_max)) {
    throw BadBounds("executable region " + hex16(er_min) + "-" + hex16(er_max) +
                    " must lie inside AppRam");
  }
  state.exec_meta = ExecMetadata{er_min, er_max, false, true, false};
  state.sync_metadata();
}

void pox_observe(DeviceState& state, const AccessEvent& event, ViolationSet violations) {
  ExecMetadata& meta = state.exec_meta;
  if (meta.armed) {
    const bool pc_outside = event.pc < meta.er_min || event.pc > meta.er_max;
    if (event.irq || !violations.empty() || pc_outside) {
      meta.breached = true;
      meta.exec_flag = false;
    }
  } else if (meta.exec_flag && write_hits_er(event, meta)) {
    meta.exec_flag = false;
  }
}

void pox_end(DeviceState& state) {
  ExecMetadata& meta = state.exec_meta;
  if (!meta.armed) return;
  meta.armed = false;
  meta.exec_flag = !meta.breached;
  state.sync_metadata();
}

Bytes encode_tag_input(const Nonce& nonce, Addr er_min, Addr er_max, bool exec_flag,
                       std::span<const Byte> region) {
  Bytes out;
  out.reserve(kNonceSize + 5 + region.size());
  out.insert(out.end(), nonce.begin(), nonce.end());
  put_u16(out, er_min);
  put_u16(out, er_max);
  out.push_back(exec_flag ? 0x01 : 0x00);
  out.insert(out.end(), region.begin(), region.end());
  return out;
}

AttestReport attest(const DeviceState& state, const AttestRequest& request) {
  Bytes region;
  try {
    region = state.read_range(request.region_start, request.region_end);
  } catch (const UnmappedAddress& e) {
    throw BadBounds(e.what());
  }
  AttestReport report;
  report.exec_flag = state.exec_meta.exec_flag;
  report.er_min = state.exec_meta.er_min;
  report.er_max = state.exec_meta.er_max;
  report.tag = crypto::hmac_sha256(
      state.key(),
      encode_tag_input(request.nonce, report.er_min, report.er_max, report.exec_flag, region));
  return report;
}

bool verify_report(std::span<const Byte> key, const AttestRequest& request,
                   const AttestReport& report, std::span<const Byte> expected_region,
                   ExecPolicy policy) {
  if (request.region_start > request.region_end) return false;
  const std::size_t expected_len =
      static_cast<std::size_t>(request.region_end) - request.region_start + 1;
  if (expected_region.size() != expected_len) return false;

  const Digest expected = crypto::hmac_sha256(
      key, encode_tag_input(request.nonce, report.er_min, report.er_max, report.exec_flag,
                            expected_region));
  const bool tag_ok = crypto::constant_time_equal(expected, report.tag);
  const bool exec_ok = policy == ExecPolicy::Ignore || report.exec_flag;
  return tag_ok && exec_ok;
}

Bytes encode_frame(const AttestRequest& request) {
  Bytes payload(request.nonce.begin(), request.nonce.end());
  put_u16(payload, request.region_start);
  put_u16(payload, request.region_end);
  return frame(kFrameRequest, payload);
}

Bytes encode_frame(const AttestReport& report) {
  Bytes payload;
  put_u16(payload, report.er_min);
  put_u16(payload, report.er_max);
  payload.push_back(report.exec_flag ? 0x01 : 0x00);
  payload.insert(payload.end(), report.tag.begin(), report.tag.end());
  return frame(kFrameReport, payload);
}

std::optional<Message> decode_frame(std::span<const Byte> stream, std::size_t* consumed) {
  if (stream.size() < 4) return std::nullopt;
  const std::uint32_t length = (std::uint32_t{stream[0]} << 24) | (std::uint32_t{stream[1]} << 16) |
                               (std::uint32_t{stream[2]} << 8) | std::uint32_t{stream[3]};
  if (length == 0) throw FrameError("zero-length frame");
  if (stream.size() < 4 + std::size_t{length}) return std::nullopt;

  const Byte type = stream[4];
  auto payload = stream.subspan(5, length - 1);
  if (consumed) *consumed = 4 + std::size_t{length};

  if (type == kFrameRequest) {
    if (payload.size() != kRequestPayloadSize) {
      throw FrameError("request payload must be " + std::to_string(kRequestPayloadSize) +
                       " bytes, got " + std::to_string(payload.size()));
    }
    AttestRequest request;
    std::copy_n(payload.begin(), kNonceSize, request.nonce.begin());
    request.region_start = get_u16(payload, kNonceSize);
    request.region_end = get_u16(payload, kNonceSize + 2);
    return request;
  }
  if (type == kFrameReport) {
    if (payload.size() != kReportPayloadSize) {
      throw FrameError("report payload must be " + std::to_string(kReportPayloadSize) +
                       " bytes, got " + std::to_string(payload.size()));
    }
    if (payload[4] > 1) throw FrameError("exec_flag byte must be 0x00 or 0x01");
    AttestReport report;
    report.er_min = get_u16(payload, 0);
    report.er_max = get_u16(payload, 2);
    report.exec_flag = payload[4] == 1;
    std::copy_n(payload.begin() + 5, kDigestSize, report.tag.begin());
    return report;
  }
  throw FrameError("unknown frame type " + hex8(type));
}

void LoopbackChannel::send(std::span<const Byte> frame) {
  buffer_.insert(buffer_.end(), frame.begin(), frame.end());
}

std::optional<Message> LoopbackChannel::receive() {
  const Bytes snapshot(buffer_.begin(), buffer_.end());
  std::size_t consumed = 0;
  auto message = decode_frame(snapshot, &consumed);
  if (message) buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(consumed));
  return message;
}

}  // namespace rares::attestation
