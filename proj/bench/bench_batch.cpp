#include <benchmark/benchmark.h>

#include "rares/batch.hpp"
#include "support/generators.hpp"

using namespace rares;

namespace {

const MemoryLayout kLayout = MemoryLayout::defaults();

std::vector<batch::Trace> make_traces(std::size_t n) {
  testing::Rng rng(1);
  std::vector<batch::Trace> out(n);
  for (auto& t : out) t = testing::random_trace(rng, kLayout, 256);
  return out;
}

std::vector<Scenario> make_scenarios(std::size_t n) {
  testing::Rng rng(2);
  std::vector<Scenario> out(n);
  for (auto& sc : out) {
    std::uint64_t cycle = 0;
    for (const auto& e : testing::random_trace(rng, kLayout, 256)) sc.trace.push_back({++cycle, e});
  }
  return out;
}

template <auto Kernel>
void BM_detect(benchmark::State& state) {
  const auto traces = make_traces(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(kLayout, traces));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_run(benchmark::State& state) {
  const auto scenarios = make_scenarios(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(scenarios));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_detect<batch::detect_serial>)->Name("detect/serial")->Arg(1024)->Arg(8192);
BENCHMARK(BM_detect<batch::detect_parallel>)->Name("detect/parallel")->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_detect<batch::oracle_serial>)->Name("oracle/serial")->Arg(1024)->Arg(8192);
BENCHMARK(BM_detect<batch::oracle_parallel>)->Name("oracle/parallel")->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_run<batch::run_serial>)->Name("run/serial")->Arg(256);
BENCHMARK(BM_run<batch::run_parallel>)->Name("run/parallel")->Arg(256)->UseRealTime();

BENCHMARK_MAIN();
