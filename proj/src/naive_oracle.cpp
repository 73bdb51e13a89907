// Brute-force trace classifier used as the reference for the incremental
// detector. It re-derives every rule from a flat table and resolves regions by
// linear scan, sharing no code with detector::classify.

#include <optional>

#include "rares/scenario.hpp"

namespace rares {

namespace {

enum Ctx : unsigned { kApp = 1, kSwAtt = 2, kOther = 4 };
enum class Who { Irq, Cpu, Dma };
enum class Dir { Any, Read, Write };

struct Rule {
  ViolationKind kind;
  Who who;
  Dir dir;
  std::optional<RegionKind> target;
  unsigned contexts;
};

constexpr Rule kRules[] = {
    {ViolationKind::IrqRam, Who::Irq, Dir::Any, std::nullopt, kApp},
    {ViolationKind::IrqStack, Who::Irq, Dir::Any, std::nullopt, kSwAtt},
    {ViolationKind::CpuRomRd, Who::Cpu, Dir::Read, RegionKind::KeyRom, kApp | kOther},
    {ViolationKind::CpuRomRd, Who::Cpu, Dir::Read, RegionKind::BootRom, kOther},
    {ViolationKind::CpuStackRd, Who::Cpu, Dir::Read, RegionKind::ReservedStack, kOther},
    {ViolationKind::CpuRamRd, Who::Cpu, Dir::Read, RegionKind::AppRam, kSwAtt},
    {ViolationKind::CpuRamWr, Who::Cpu, Dir::Write, RegionKind::AppRam, kSwAtt},
    {ViolationKind::DmaRomRd, Who::Dma, Dir::Read, RegionKind::KeyRom, kApp | kOther},
    {ViolationKind::DmaRomRd, Who::Dma, Dir::Read, RegionKind::BootRom, kOther},
    {ViolationKind::DmaStackRd, Who::Dma, Dir::Read, RegionKind::ReservedStack, kOther},
    {ViolationKind::DmaRamRd, Who::Dma, Dir::Read, RegionKind::AppRam, kSwAtt},
    {ViolationKind::DmaRamWr, Who::Dma, Dir::Write, RegionKind::AppRam, kSwAtt},
};

std::optional<RegionKind> scan(const MemoryLayout& layout, Addr addr) {
  for (const Region& r : layout.regions()) {
    if (addr >= r.start && addr <= r.end) return r.kind;
  }
  return std::nullopt;
}

unsigned context_of(const MemoryLayout& layout, Addr pc) {
  const auto where = scan(layout, pc);
  if (where == RegionKind::AppRam) return kApp;
  if (where == RegionKind::BootRom) return kSwAtt;
  return kOther;
}

bool matches(const Rule& rule, const AccessEvent& e, unsigned ctx,
             const std::optional<RegionKind>& cpu_target, const std::optional<RegionKind>& dma_target) {
  if ((rule.contexts & ctx) == 0) return false;
  if (rule.who == Who::Irq) return e.irq;
  const bool is_dma = rule.who == Who::Dma;
  if (e.dma_en != is_dma) return false;
  if (rule.dir == Dir::Read && !e.ren) return false;
  if (rule.dir == Dir::Write && !e.wen) return false;
  return (is_dma ? dma_target : cpu_target) == rule.target;
}

}  // namespace

std::uint16_t classify_event_naive(const MemoryLayout& layout, const AccessEvent& event) {
  const unsigned ctx = context_of(layout, event.pc);
  const auto cpu_target = scan(layout, event.daddr);
  const auto dma_target = scan(layout, event.dma_addr);
  std::uint16_t bits = 0;
  for (const Rule& rule : kRules) {
    if (matches(rule, event, ctx, cpu_target, dma_target)) bits |= bit_of(rule.kind);
  }
  return bits;
}

std::uint16_t classify_trace_naive(const MemoryLayout& layout, std::span<const AccessEvent> trace) {
  std::uint16_t bits = 0;
  for (const AccessEvent& event : trace) bits |= classify_event_naive(layout, event);
  return bits;
}

}  // namespace rares
