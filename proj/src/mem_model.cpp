#include "rares/mem_model.hpp"

#include <algorithm>

namespace rares {

namespace {

constexpr std::array<std::string_view, kRegionCount> kRegionNames = {
    "BootRom", "KeyRom", "RecoveryRom", "Flash", "AppRam", "ReservedStack", "Metadata",
};

std::string range_text(const Region& r) {
  return std::string(region_name(r.kind)) + " " + hex16(r.start) + "-" + hex16(r.end);
}

}  // namespace

std::string_view region_name(RegionKind kind) { return kRegionNames[region_index(kind)]; }

std::optional<RegionKind> region_from_name(std::string_view name) {
  for (RegionKind kind : kAllRegionKinds) {
    if (kRegionNames[region_index(kind)] == name) return kind;
  }
  return std::nullopt;
}

MemoryLayout MemoryLayout::build(std::span<const Region> regions) {
  std::array<std::optional<Region>, kRegionCount> seen;
  for (const Region& r : regions) {
    if (r.start > r.end) throw InvertedRegion("start above end: " + range_text(r));
    auto& slot = seen[region_index(r.kind)];
    if (slot) throw DuplicateRegion("region listed twice: " + std::string(region_name(r.kind)));
    slot = r;
  }
  for (RegionKind kind : kAllRegionKinds) {
    if (!seen[region_index(kind)]) {
      throw MissingRegion("missing region: " + std::string(region_name(kind)));
    }
  }

  MemoryLayout layout;
  for (RegionKind kind : kAllRegionKinds) layout.by_kind_[region_index(kind)] = *seen[region_index(kind)];

  layout.by_start_ = layout.by_kind_;
  std::sort(layout.by_start_.begin(), layout.by_start_.end(),
            [](const Region& a, const Region& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < kRegionCount; ++i) {
    const Region& prev = layout.by_start_[i - 1];
    const Region& cur = layout.by_start_[i];
    if (cur.start <= prev.end) {
      throw OverlapError("regions overlap: " + range_text(prev) + " and " + range_text(cur));
    }
  }

  if (layout.region(RegionKind::KeyRom).size() != kKeySize) {
    throw KeyRomSizeError("KeyRom must be exactly 32 bytes, got " +
                          std::to_string(layout.region(RegionKind::KeyRom).size()));
  }
  if (layout.region(RegionKind::Metadata).size() < 2) {
    throw MetadataSizeError("Metadata must hold at least the 2-byte Ctrl_register image");
  }
  return layout;
}

MemoryLayout MemoryLayout::defaults() {
  static const std::array<Region, kRegionCount> kDefaults = {{
      {RegionKind::BootRom, 0x6000, 0x69FF},
      {RegionKind::KeyRom, 0x6A00, 0x6A1F},
      {RegionKind::RecoveryRom, 0x7000, 0x77FF},
      {RegionKind::Flash, 0xE000, 0xE7FF},
      {RegionKind::AppRam, 0x4000, 0x5FFF},
      {RegionKind::ReservedStack, 0x0200, 0x0AFF},
      {RegionKind::Metadata, 0x0B00, 0x0B0F},
  }};
  return build(kDefaults);
}

std::optional<RegionKind> MemoryLayout::classify(Addr addr) const {
  auto it = std::upper_bound(by_start_.begin(), by_start_.end(), addr,
                             [](Addr a, const Region& r) { return a < r.start; });
  if (it == by_start_.begin()) return std::nullopt;
  --it;
  if (addr <= it->end) return it->kind;
  return std::nullopt;
}

DeviceState::DeviceState(MemoryLayout l) : layout(std::move(l)) {
  for (RegionKind kind : kAllRegionKinds) {
    mem[region_index(kind)].assign(layout.region(kind).size(), 0x00);
  }
}

Byte DeviceState::read(Addr addr) const {
  auto kind = layout.classify(addr);
  if (!kind) return 0x00;
  return mem[region_index(*kind)][addr - layout.region(*kind).start];
}

Bytes DeviceState::read_range(Addr start, Addr end) const {
  auto kind = layout.classify(start);
  if (!kind || start > end || !layout.contains(*kind, end)) {
    throw UnmappedAddress("range " + hex16(start) + "-" + hex16(end) +
                          " is not inside a single region");
  }
  const auto base = layout.region(*kind).start;
  auto region = bytes(*kind);
  return Bytes(region.begin() + (start - base), region.begin() + (end - base) + 1);
}

std::span<const Byte> DeviceState::golden_bytes() const {
  const std::size_t flash_size = layout.region(RegionKind::Flash).size();
  auto rom = bytes(RegionKind::RecoveryRom);
  return rom.subspan(0, std::min(flash_size, rom.size()));
}

void DeviceState::sync_metadata() {
  auto meta = bytes(RegionKind::Metadata);
  meta[kMetaCtrlOffset] = static_cast<Byte>(ctrl.value() & 0xFF);
  meta[kMetaCtrlOffset + 1] = static_cast<Byte>(ctrl.value() >> 8);
  if (meta.size() > kMetaExecOffset) meta[kMetaExecOffset] = exec_meta.exec_flag ? 1 : 0;
}

std::string_view write_outcome_name(WriteOutcome outcome) {
  return outcome == WriteOutcome::Applied ? "applied" : "suppressed";
}

WriteOutcome apply_write(DeviceState& state, Addr addr, Byte value) {
  auto kind = state.layout.classify(addr);
  if (!kind) throw UnmappedAddress("write to unmapped address " + hex16(addr));
  if (state.chip_gate_active || is_rom(*kind)) return WriteOutcome::Suppressed;
  state.mem[region_index(*kind)][addr - state.layout.region(*kind).start] = value;
  return WriteOutcome::Applied;
}

}  // namespace rares
