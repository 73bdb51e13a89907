#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rares/common.hpp"
#include "rares/mem_model.hpp"
#include "rares/registers.hpp"

namespace rares {

/// One machine cycle of the seven tapped bus control signals.
///
/// With dma_en set, ren/wen describe the DMA transfer at dma_addr; otherwise
/// they describe the CPU access at daddr. `data` is the value on the data bus
/// for writes; the monitor never looks at it.
struct AccessEvent {
  Addr pc = 0;
  bool irq = false;
  bool ren = false;
  bool wen = false;
  Addr daddr = 0;
  bool dma_en = false;
  Addr dma_addr = 0;
  Byte data = 0;

  /// ren and wen are never asserted together.
  constexpr bool well_formed() const { return !(ren && wen); }
  /// Address of the access, whichever requester won the bus.
  constexpr Addr target() const { return dma_en ? dma_addr : daddr; }
  constexpr bool accesses_memory() const { return ren || wen; }

  friend constexpr bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

/// Short text such as "pc=0x4000 CPU R 0x6A00" for report rows.
std::string summarize(const AccessEvent& event);

enum class ExecContext { InApp, InSwAtt, Other };

std::string_view context_name(ExecContext ctx);

class WriteAccessDenied : public Error {
 public:
  using Error::Error;
};

namespace detector {

ExecContext exec_context(const MemoryLayout& layout, Addr pc);

/// Pure rule-table classification of a single cycle.
ViolationSet classify(const MemoryLayout& layout, const AccessEvent& event);

/// Advances the monitor by one mclk: latches classify(event) into the
/// Ctrl_register, bumps the cycle counter and feeds the proof-of-execution
/// tracker. Returns the kinds matched in this cycle.
ViolationSet step(DeviceState& state, const AccessEvent& event);

/// Software view of the Ctrl_register.
std::uint16_t software_read_ctrl(const DeviceState& state);

/// There is no software write path; always throws WriteAccessDenied.
[[noreturn]] void software_write_ctrl(DeviceState& state, std::uint16_t value);

}  // namespace detector
}  // namespace rares
