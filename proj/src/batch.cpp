#include "rares/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rares::batch {

namespace {

std::uint16_t detect_one(const MemoryLayout& layout, const Trace& trace) {
  DeviceState state(layout);
  for (const AccessEvent& event : trace) detector::step(state, event);
  return state.ctrl.value();
}

}  // namespace

std::vector<std::uint16_t> detect_serial(const MemoryLayout& layout, std::span<const Trace> traces) {
  std::vector<std::uint16_t> out(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) out[i] = detect_one(layout, traces[i]);
  return out;
}

std::vector<std::uint16_t> detect_parallel(const MemoryLayout& layout, std::span<const Trace> traces) {
  std::vector<std::uint16_t> out(traces.size());
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detect_one(layout, traces[i]);
  return out;
}

std::vector<std::uint16_t> oracle_serial(const MemoryLayout& layout, std::span<const Trace> traces) {
  std::vector<std::uint16_t> out(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) out[i] = classify_trace_naive(layout, traces[i]);
  return out;
}

std::vector<std::uint16_t> oracle_parallel(const MemoryLayout& layout, std::span<const Trace> traces) {
  std::vector<std::uint16_t> out(traces.size());
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = classify_trace_naive(layout, traces[i]);
  return out;
}

std::vector<RunReport> run_serial(std::span<const Scenario> scenarios) {
  std::vector<RunReport> out;
  out.reserve(scenarios.size());
  for (const Scenario& sc : scenarios) out.push_back(run(sc));
  return out;
}

std::vector<RunReport> run_parallel(std::span<const Scenario> scenarios) {
  std::vector<RunReport> out(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run(scenarios[i]);
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rares::batch
