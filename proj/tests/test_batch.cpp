#include <doctest.h>

#include <filesystem>

#include "rares/batch.hpp"
#include "rares/report.hpp"
#include "support/generators.hpp"

using namespace rares;

TEST_CASE("parallel detector kernel matches the serial reference and the oracle") {
  const auto layout = MemoryLayout::defaults();
  testing::Rng rng(42);
  std::vector<batch::Trace> traces(3000);
  for (auto& t : traces) t = testing::random_trace(rng, layout, 128);

  const auto serial = batch::detect_serial(layout, traces);
  const auto parallel = batch::detect_parallel(layout, traces);
  const auto oracle = batch::oracle_parallel(layout, traces);
  CHECK(serial == parallel);
  CHECK(serial == oracle);
  CHECK(batch::oracle_serial(layout, traces) == oracle);
}

TEST_CASE("parallel scenario runs render identically to serial runs") {
  std::vector<Scenario> scenarios;
  for (const auto& entry : std::filesystem::directory_iterator(RARES_SCENARIO_DIR)) {
    scenarios.push_back(load_scenario(entry.path()));
  }
  REQUIRE(!scenarios.empty());
  const auto serial = batch::run_serial(scenarios);
  const auto parallel = batch::run_parallel(scenarios);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(render_json(serial[i], {true}) == render_json(parallel[i], {true}));
  }
  CHECK(batch::max_threads() >= 1);
}
