#pragma once

// Many independent devices at once. Each trace or scenario owns its own
// DeviceState, so the OpenMP kernels share nothing mutable. The *_serial
// variants are the reference the parallel ones are tested against.

#include <cstdint>
#include <span>
#include <vector>

#include "rares/detector.hpp"
#include "rares/scenario.hpp"

namespace rares::batch {

using Trace = std::vector<AccessEvent>;

/// Final Ctrl_register of a fresh detector stepped over each trace.
std::vector<std::uint16_t> detect_serial(const MemoryLayout& layout, std::span<const Trace> traces);
std::vector<std::uint16_t> detect_parallel(const MemoryLayout& layout, std::span<const Trace> traces);

/// classify_trace_naive over each trace.
std::vector<std::uint16_t> oracle_serial(const MemoryLayout& layout, std::span<const Trace> traces);
std::vector<std::uint16_t> oracle_parallel(const MemoryLayout& layout, std::span<const Trace> traces);

std::vector<RunReport> run_serial(std::span<const Scenario> scenarios);
std::vector<RunReport> run_parallel(std::span<const Scenario> scenarios);

/// Worker threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace rares::batch
