#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rares/attestation.hpp"
#include "rares/detector.hpp"
#include "rares/mem_model.hpp"
#include "rares/prevention.hpp"
#include "rares/secureboot.hpp"

namespace rares {

struct TraceEvent {
  std::uint64_t cycle = 0;
  AccessEvent event;
};

struct PoxWindow {
  std::uint64_t begin_cycle = 0;
  std::uint64_t end_cycle = 0;
  Addr er_min = 0;
  Addr er_max = 0;
};

struct ScheduledAttest {
  std::uint64_t cycle = 0;
  AttestRequest request;
};

/// Post-provisioning corruption: mem[region][offset] ^= xor_mask.
struct Tamper {
  RegionKind region = RegionKind::Flash;
  std::size_t offset = 0;
  Byte xor_mask = 0;
};

/// Key used when a scenario does not specify one: bytes 0x00..0x1F.
Bytes default_key();

/// Declarative description of one device run.
struct Scenario {
  std::string name;
  MemoryLayout layout = MemoryLayout::defaults();
  Bytes key = default_key();
  /// Golden image, Flash-sized.
  Bytes golden = Bytes(layout.region(RegionKind::Flash).size(), 0);
  /// Initial contents per region, zero-padded. Flash contents here (if any)
  /// replace the golden image as the power-on flash.
  std::array<std::optional<Bytes>, kRegionCount> contents;
  std::vector<Tamper> tampers;
  PreventionBinding binding = prevention::default_binding();
  std::optional<PoxWindow> pox;
  std::vector<ScheduledAttest> attests;
  std::vector<TraceEvent> trace;

  /// The device as the verifier believes it was provisioned.
  DeviceState provisioned() const;
  /// The device at power-on: provisioned, then flash override and tampers.
  DeviceState initial_state() const;
};

class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// Malformed text; location is "line L, column C".
class SyntaxError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// Well-formed text with invalid content; location is a field path such as
/// "trace[3].cycle".
class SemanticError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

enum class MemoryEffect { None, Read, Applied, Suppressed, Halted, Unmapped };

std::string_view effect_name(MemoryEffect effect);

struct CycleRow {
  std::uint64_t cycle = 0;
  AccessEvent event;
  ViolationSet violations;
  /// Register after the detector latch, before prevention.
  std::uint16_t detect_ctrl = 0;
  /// Register after prevention.
  std::uint16_t ctrl = 0;
  std::vector<ActionRecord> actions;
  MemoryEffect effect = MemoryEffect::None;
};

enum class RecoveryKind { Reflash, Reset };

struct RecoveryEvent {
  std::uint64_t after_cycle = 0;
  RecoveryKind kind = RecoveryKind::Reflash;
  std::uint16_t ctrl_before = 0;
  std::uint16_t ctrl_after = 0;
  /// FSBL outcome after a reset.
  std::optional<BootReport> boot;
};

struct AttestRecord {
  std::uint64_t cycle = 0;
  AttestRequest request;
  AttestReport report;
  bool verified = false;
};

enum class ExitClass { Clean, Violations, Unrecoverable };

std::string_view exit_class_name(ExitClass exit);

struct RunReport {
  std::string scenario;
  BootReport boot;
  std::vector<CycleRow> rows;
  std::vector<RecoveryEvent> recoveries;
  std::vector<AttestRecord> attestations;
  std::uint16_t final_ctrl = 0;
  /// OR of every detection latch over the run, ignoring recovery/reset clears.
  std::uint16_t ctrl_pre_clear = 0;
  ModeRegister final_r2;
  bool final_cpu_halted = false;
  bool final_chip_gate_active = false;
  bool final_exec_flag = false;
  /// SHA-256 of each region's final contents; KeyRom is never included.
  std::vector<std::pair<RegionKind, Digest>> final_digests;
  ExitClass exit = ExitClass::Clean;
};

struct RunResult {
  RunReport report;
  DeviceState state;
};

/// Boot, replay the trace through detector -> prevention -> memory -> POX,
/// service recoveries at cycle boundaries and answer scheduled attestations.
RunResult execute(const Scenario& scenario);
inline RunReport run(const Scenario& scenario) { return execute(scenario).report; }

/// Whole-trace brute-force re-scan of the access rules, independent of the
/// incremental detector. Returns the OR of every matched bit.
std::uint16_t classify_trace_naive(const MemoryLayout& layout, std::span<const AccessEvent> trace);

/// Per-event form of the same oracle.
std::uint16_t classify_event_naive(const MemoryLayout& layout, const AccessEvent& event);

}  // namespace rares
