#include "rares/detector.hpp"

#include "rares/attestation.hpp"

namespace rares {

std::string summarize(const AccessEvent& event) {
  std::string out = "pc=" + hex16(event.pc);
  if (event.irq) out += " IRQ";
  if (event.accesses_memory()) {
    out += event.dma_en ? " DMA " : " CPU ";
    out += event.ren ? "R " : "W ";
    out += hex16(event.target());
    if (event.wen) out += "<-" + hex8(event.data);
  }
  return out;
}

std::string_view context_name(ExecContext ctx) {
  switch (ctx) {
    case ExecContext::InApp: return "InApp";
    case ExecContext::InSwAtt: return "InSwAtt";
    case ExecContext::Other: return "Other";
  }
  return "?";
}

namespace detector {

ExecContext exec_context(const MemoryLayout& layout, Addr pc) {
  if (layout.contains(RegionKind::AppRam, pc)) return ExecContext::InApp;
  if (layout.contains(RegionKind::BootRom, pc)) return ExecContext::InSwAtt;
  return ExecContext::Other;
}

ViolationSet classify(const MemoryLayout& layout, const AccessEvent& event) {
  ViolationSet out;
  const ExecContext ctx = exec_context(layout, event.pc);

  // Atomicity: interrupts during RAM or SW-Att execution.
  if (event.irq) {
    if (ctx == ExecContext::InApp) out.insert(ViolationKind::IrqRam);
    if (ctx == ExecContext::InSwAtt) out.insert(ViolationKind::IrqStack);
  }
  if (!event.accesses_memory()) return out;

  const auto target = layout.classify(event.target());
  if (!target) return out;

  const bool key_read = event.ren && *target == RegionKind::KeyRom && ctx != ExecContext::InSwAtt;
  const bool rom_read = event.ren && *target == RegionKind::BootRom && ctx == ExecContext::Other;
  const bool stack_read =
      event.ren && *target == RegionKind::ReservedStack && ctx == ExecContext::Other;
  const bool ram_in_swatt = *target == RegionKind::AppRam && ctx == ExecContext::InSwAtt;

  if (event.dma_en) {
    if (key_read || rom_read) out.insert(ViolationKind::DmaRomRd);
    if (stack_read) out.insert(ViolationKind::DmaStackRd);
    if (ram_in_swatt && event.ren) out.insert(ViolationKind::DmaRamRd);
    if (ram_in_swatt && event.wen) out.insert(ViolationKind::DmaRamWr);
  } else {
    if (key_read || rom_read) out.insert(ViolationKind::CpuRomRd);
    if (stack_read) out.insert(ViolationKind::CpuStackRd);
    if (ram_in_swatt && event.ren) out.insert(ViolationKind::CpuRamRd);
    if (ram_in_swatt && event.wen) out.insert(ViolationKind::CpuRamWr);
  }
  return out;
}

ViolationSet step(DeviceState& state, const AccessEvent& event) {
  const ViolationSet found = classify(state.layout, event);
  state.ctrl.latch(found);
  ++state.cycle;
  attestation::pox_observe(state, event, found);
  state.sync_metadata();
  return found;
}

std::uint16_t software_read_ctrl(const DeviceState& state) { return state.ctrl.value(); }

void software_write_ctrl(DeviceState& state, std::uint16_t value) {
  throw WriteAccessDenied("Ctrl_register has no software write path (attempted " + hex16(value) +
                          ", register holds " + hex16(state.ctrl.value()) + ")");
}

}  // namespace detector
}  // namespace rares
