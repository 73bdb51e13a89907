#include <doctest.h>

#include <algorithm>
#include <string>

#include "rares/report.hpp"
#include "rares/scenario.hpp"
#include "support/generators.hpp"

using namespace rares;

namespace {

const MemoryLayout kLayout = MemoryLayout::defaults();

std::string with_trace(const std::string& events, const std::string& extra = "") {
  return R"({"name": "t", )" + extra + R"( "trace": [)" + events + "]}";
}

std::string location_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.location();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("parse: minimal scenario") {
  const Scenario sc = parse_scenario("{}");
  CHECK(sc.trace.empty());
  CHECK(sc.layout == kLayout);
  CHECK(sc.key == default_key());
  CHECK(sc.binding == prevention::default_binding());
  CHECK(sc.golden.size() == kLayout.region(RegionKind::Flash).size());
}

TEST_CASE("parse: semantic errors carry a field location") {
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"key": ")" + std::string(62, 'a') + R"("})"),
                       doctest::Contains("key length"), SemanticError);
  CHECK_THROWS_WITH_AS(parse_scenario(with_trace(R"({"cycle": 1}, {"cycle": 1})")),
                       doctest::Contains("non-monotone cycle"), SemanticError);
  CHECK(location_of(with_trace(R"({"cycle": 1}, {"cycle": 1})")) == "trace[1].cycle");
  CHECK(location_of(with_trace(R"({"cycle": 1, "ren": true, "wen": true})")) == "trace[0]");
  CHECK(location_of(with_trace(R"({"cycle": 1, "pc": "0x10000"})")) == "trace[0].pc");
  CHECK(location_of(with_trace(R"({"cycle": 1, "pc": "zz"})")) == "trace[0].pc");
  CHECK(location_of(with_trace(R"({"cycle": 1, "bogus": 1})")) == "trace[0].bogus");
  CHECK(location_of(R"({"layout": {"Flash": ["0x3F00", "0x4000"]}})") == "layout");
  CHECK(location_of(R"({"layout": {"Rom": [0, 1]}})") == "layout.Rom");
  CHECK(location_of(R"({"memory": {"AppRam": "abc"}})") == "memory.AppRam");
  CHECK(location_of(R"({"memory": {"KeyRom": "00"}})") == "memory.KeyRom");
  CHECK(location_of(R"({"binding": {"CPU_ROM_RD": "Nuke"}})") == "binding.CPU_ROM_RD");
  CHECK(location_of(R"({"pox": {"begin": 1, "end": 2, "er_min": "0x6000", "er_max": "0x6001"}})") == "pox");
  CHECK(location_of(R"({"attest": [{"cycle": 1, "nonce": "00", "start": 0, "end": 0}]})") == "attest[0].nonce");
  CHECK(location_of(R"({"unknown": 1})") == "scenario.unknown");
}

TEST_CASE("parse: syntax errors carry line and column") {
  try {
    parse_scenario("{\n  \"name\": \"x\",\n  \"trace\": [,]\n}");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.location() == "line 3, column 13");
  }
}

TEST_CASE("parse: contents, golden and tampers") {
  const Scenario sc = parse_scenario(R"({
    "golden": "0102",
    "memory": {"Flash": "0103", "AppRam": "ff"},
    "tamper": [{"region": "AppRam", "offset": 1, "xor": "0x0F"}]
  })");
  CHECK(sc.golden[0] == 0x01);
  CHECK(sc.golden[1] == 0x02);
  const DeviceState pristine = sc.provisioned();
  const DeviceState power_on = sc.initial_state();
  CHECK(pristine.bytes(RegionKind::Flash)[1] == 0x02);
  CHECK(power_on.bytes(RegionKind::Flash)[1] == 0x03);
  CHECK(power_on.bytes(RegionKind::AppRam)[0] == 0xFF);
  CHECK(power_on.bytes(RegionKind::AppRam)[1] == 0x0F);
  CHECK(pristine.bytes(RegionKind::AppRam)[1] == 0x00);
}

TEST_CASE("parse: flash content alone becomes the golden image") {
  const Scenario sc = parse_scenario(R"({"memory": {"Flash": "aabb"}})");
  CHECK(sc.golden[0] == 0xAA);
  DeviceState d = sc.initial_state();
  CHECK(secureboot::verify_flash(d).ok);
}

TEST_CASE("run: benign scenario is clean") {
  const RunReport r = run(parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x4000"},
      {"cycle": 2, "pc": "0x4002", "ren": true, "daddr": "0x0300"},
      {"cycle": 3, "pc": "0x4004", "wen": true, "daddr": "0x4800", "data": 7})")));
  CHECK(r.boot.outcome == BootOutcome::VerifiedClean);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) CHECK(row.ctrl == 0);
  CHECK(r.rows[2].effect == MemoryEffect::Applied);
  CHECK(r.exit == ExitClass::Clean);
}

TEST_CASE("run: key read at cycle 5 latches D9 and halts the CPU") {
  const RunResult res = execute(parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x4000"},
      {"cycle": 5, "pc": "0x4008", "ren": true, "daddr": "0x6A00"},
      {"cycle": 6, "pc": "0x400A", "wen": true, "daddr": "0x4801", "data": 2},
      {"cycle": 7, "pc": "0x400A", "dma_en": true, "wen": true, "dma_addr": "0x4900", "data": 51})")));
  const RunReport& r = res.report;
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[1].cycle == 5);
  CHECK(r.rows[1].ctrl == 0x0200);
  REQUIRE(r.rows[1].actions.size() == 1);
  CHECK(r.rows[1].actions[0].action == PreventionAction::hard_cpu_off());
  CHECK(r.rows[2].effect == MemoryEffect::Halted);
  CHECK(r.rows[3].effect == MemoryEffect::Applied);
  CHECK(res.state.read(0x4801) == 0x00);
  CHECK(res.state.read(0x4900) == 51);
  CHECK(r.exit == ExitClass::Violations);
}

TEST_CASE("run: DMA write during SW-Att is suppressed and recovered") {
  const RunResult res = execute(parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x6000"},
      {"cycle": 2, "pc": "0x6004", "dma_en": true, "wen": true, "dma_addr": "0x4004", "data": 255},
      {"cycle": 3, "pc": "0x6006"})", R"("memory": {"AppRam": "0011223344"},)")));
  const RunReport& r = res.report;
  CHECK(r.rows[1].detect_ctrl == 0x0004);
  CHECK(r.rows[1].effect == MemoryEffect::Suppressed);
  REQUIRE(r.recoveries.size() == 1);
  CHECK(r.recoveries[0].kind == RecoveryKind::Reflash);
  CHECK(r.recoveries[0].after_cycle == 2);
  CHECK(r.recoveries[0].ctrl_after == 0x0000);
  CHECK(r.rows[2].ctrl == 0x0000);
  CHECK(res.state.read(0x4004) == 0x44);
  CHECK(r.ctrl_pre_clear == 0x0004);
}

TEST_CASE("run: interrupt in application code resets the device") {
  const RunReport r = run(parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x4000", "irq": true},
      {"cycle": 2, "pc": "0x4000"})")));
  CHECK(r.rows[0].ctrl == 0x0401);
  REQUIRE(r.recoveries.size() == 1);
  CHECK(r.recoveries[0].kind == RecoveryKind::Reset);
  REQUIRE(r.recoveries[0].boot);
  CHECK(r.recoveries[0].boot->outcome == BootOutcome::VerifiedClean);
  CHECK(r.rows[1].ctrl == 0x0000);
}

TEST_CASE("run: unrecoverable boot refuses the trace") {
  const RunReport r = run(parse_scenario(with_trace(R"({"cycle": 1, "pc": "0x4000"})",
      R"("golden": "01", "tamper": [{"region": "Flash", "offset": 0}, {"region": "RecoveryRom", "offset": 0}],)")));
  CHECK(r.boot.outcome == BootOutcome::Unrecoverable);
  CHECK(r.rows.empty());
  CHECK(r.exit == ExitClass::Unrecoverable);
}

TEST_CASE("run: attestation is answered after the cycle and reflects EXEC") {
  const std::string nonce(64, '7');
  const RunReport r = run(parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x4000"},
      {"cycle": 2, "pc": "0x4010"},
      {"cycle": 3, "pc": "0xE000"})",
      R"("pox": {"begin": 1, "end": 2, "er_min": "0x4000", "er_max": "0x40FF"},
         "attest": [{"cycle": 2, "nonce": ")" + nonce + R"(", "start": "0x4000", "end": "0x40FF"},
                    {"cycle": 0, "nonce": ")" + nonce + R"(", "start": "0x4000", "end": "0x40FF"}],)")));
  REQUIRE(r.attestations.size() == 2);
  CHECK(r.attestations[0].cycle == 0);
  CHECK_FALSE(r.attestations[0].report.exec_flag);
  CHECK(r.attestations[1].report.exec_flag);
  CHECK(r.attestations[1].report.er_min == 0x4000);
  CHECK(r.attestations[0].verified);
  CHECK(r.attestations[1].verified);
  CHECK(r.final_exec_flag);
}

TEST_CASE("naive oracle examples") {
  CHECK(classify_trace_naive(kLayout, {}) == 0x0000);
  const AccessEvent d9{.pc = 0x4000, .ren = true, .daddr = 0x6A00};
  CHECK(classify_trace_naive(kLayout, std::vector{d9}) == 0x0200);

  testing::Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    auto t1 = testing::random_trace(rng, kLayout, 40);
    auto t2 = testing::random_trace(rng, kLayout, 40);
    auto both = t1;
    both.insert(both.end(), t2.begin(), t2.end());
    REQUIRE(classify_trace_naive(kLayout, both) ==
            (classify_trace_naive(kLayout, t1) | classify_trace_naive(kLayout, t2)));
  }
}

TEST_CASE("run: pre-clear snapshot equals the naive oracle on fuzzed scenarios") {
  testing::Rng rng(2718);
  for (int i = 0; i < 300; ++i) {
    Scenario sc;
    const auto events = testing::random_trace(rng, kLayout, 64);
    std::uint64_t cycle = 0;
    for (const auto& e : events) sc.trace.push_back({cycle += 1 + rng() % 3, e});
    const RunReport r = run(sc);
    REQUIRE(r.rows.size() == events.size());
    REQUIRE(r.ctrl_pre_clear == classify_trace_naive(kLayout, events));
  }
}

TEST_CASE("report rendering is deterministic and never contains the key") {
  const std::string key_hex = "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4";
  const Scenario sc = parse_scenario(with_trace(R"(
      {"cycle": 1, "pc": "0x4000", "ren": true, "daddr": "0x6A00"},
      {"cycle": 2, "pc": "0x6000", "dma_en": true, "wen": true, "dma_addr": "0x4000"})",
      R"("key": ")" + key_hex + R"(",
         "attest": [{"cycle": 2, "nonce": ")" + std::string(64, 'a') + R"(", "start": "0x4000", "end": "0x4003"}],)"));
  const std::string a = render_json(run(sc), {true});
  const std::string b = render_json(run(sc), {true});
  CHECK(a == b);
  CHECK(a.find(key_hex) == std::string::npos);
  CHECK(a.find("\"ctrl_pre_clear\": \"0x0204\"") != std::string::npos);
  const std::string text = render_text(run(sc));
  CHECK(text.find(key_hex) == std::string::npos);
  CHECK(text.find("0x0200") != std::string::npos);
  CHECK(render_json(run(sc)).find("ctrl_pre_clear") == std::string::npos);
}
