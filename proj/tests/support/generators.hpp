#pragma once

// Hand-rolled random generators for property tests. Addresses are biased
// towards region boundaries and interiors so that every access rule fires
// with useful frequency.

#include <random>
#include <vector>

#include "rares/detector.hpp"
#include "rares/mem_model.hpp"

namespace rares::testing {

using Rng = std::mt19937_64;

inline Addr random_addr(Rng& rng, const MemoryLayout& layout) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int choice = pick(rng);
  if (choice >= static_cast<int>(kRegionCount)) {
    return static_cast<Addr>(std::uniform_int_distribution<unsigned>(0, 0xFFFF)(rng));
  }
  const Region& r = layout.region(kAllRegionKinds[choice]);
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: return r.start;
    case 1: return r.end;
    default: return static_cast<Addr>(std::uniform_int_distribution<unsigned>(r.start, r.end)(rng));
  }
}

inline Addr random_pc(Rng& rng, const MemoryLayout& layout) {
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
    case 1: {
      const Region& r = layout.region(RegionKind::AppRam);
      return static_cast<Addr>(std::uniform_int_distribution<unsigned>(r.start, r.end)(rng));
    }
    case 2: {
      const Region& r = layout.region(RegionKind::BootRom);
      return static_cast<Addr>(std::uniform_int_distribution<unsigned>(r.start, r.end)(rng));
    }
    default: return random_addr(rng, layout);
  }
}

/// A well-formed event (ren and wen never both set).
inline AccessEvent random_event(Rng& rng, const MemoryLayout& layout, double irq_p = 0.05) {
  AccessEvent e;
  e.pc = random_pc(rng, layout);
  e.irq = std::bernoulli_distribution(irq_p)(rng);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 1: e.ren = true; break;
    case 2: e.wen = true; break;
    default: break;
  }
  e.dma_en = std::bernoulli_distribution(0.35)(rng);
  e.daddr = random_addr(rng, layout);
  e.dma_addr = random_addr(rng, layout);
  e.data = static_cast<Byte>(rng());
  return e;
}

inline std::vector<AccessEvent> random_trace(Rng& rng, const MemoryLayout& layout, std::size_t max_len = 256) {
  std::vector<AccessEvent> trace(std::uniform_int_distribution<std::size_t>(0, max_len)(rng));
  for (auto& e : trace) e = random_event(rng, layout);
  return trace;
}

inline Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<Byte>(rng());
  return out;
}

}  // namespace rares::testing
