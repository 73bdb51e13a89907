#include "rares/hmac.hpp"
#include "rares/scenario.hpp"

namespace rares {

std::string_view effect_name(MemoryEffect effect) {
  switch (effect) {
    case MemoryEffect::None: return "none";
    case MemoryEffect::Read: return "read";
    case MemoryEffect::Applied: return "applied";
    case MemoryEffect::Suppressed: return "suppressed";
    case MemoryEffect::Halted: return "halted";
    case MemoryEffect::Unmapped: return "unmapped";
  }
  return "?";
}

std::string_view exit_class_name(ExitClass exit) {
  switch (exit) {
    case ExitClass::Clean: return "clean";
    case ExitClass::Violations: return "violations";
    case ExitClass::Unrecoverable: return "unrecoverable";
  }
  return "?";
}

namespace {

MemoryEffect memory_effect(DeviceState& state, const AccessEvent& event) {
  if (!event.accesses_memory()) return MemoryEffect::None;
  if (state.chip_gate_active) return MemoryEffect::Suppressed;
  if (!event.dma_en && state.cpu_stopped()) return MemoryEffect::Halted;
  if (event.ren) return MemoryEffect::Read;
  if (!state.layout.classify(event.target())) return MemoryEffect::Unmapped;
  return apply_write(state, event.target(), event.data) == WriteOutcome::Applied
             ? MemoryEffect::Applied
             : MemoryEffect::Suppressed;
}

// Power-on-reset semantics: registers and latches drop, memory survives, the
// FSBL runs again.
BootReport system_reset(DeviceState& state) {
  state.ctrl.clear_all();
  state.r2 = ModeRegister{};
  state.cpu_halted = false;
  state.chip_gate_active = false;
  state.reset_pending = false;
  state.recovery_pending = false;
  state.exec_meta = ExecMetadata{};
  state.sync_metadata();
  return secureboot::fsbl_boot(state);
}

void finalize(RunReport& report, const DeviceState& state) {
  report.final_ctrl = state.ctrl.value();
  report.final_r2 = state.r2;
  report.final_cpu_halted = state.cpu_halted;
  report.final_chip_gate_active = state.chip_gate_active;
  report.final_exec_flag = state.exec_meta.exec_flag;
  for (RegionKind kind : kAllRegionKinds) {
    if (kind == RegionKind::KeyRom) continue;
    report.final_digests.emplace_back(kind, crypto::sha256(state.bytes(kind)));
  }
}

}  // namespace

RunResult execute(const Scenario& scenario) {
  RunResult result{RunReport{}, scenario.initial_state()};
  RunReport& report = result.report;
  DeviceState& state = result.state;
  report.scenario = scenario.name;

  report.boot = secureboot::fsbl_boot(state);
  if (report.boot.outcome == BootOutcome::Unrecoverable) {
    report.exit = ExitClass::Unrecoverable;
    finalize(report, state);
    return result;
  }

  const DeviceState expected = scenario.provisioned();
  std::size_t next_attest = 0;
  auto answer_before = [&](std::optional<std::uint64_t> next_cycle) {
    while (next_attest < scenario.attests.size() &&
           (!next_cycle || scenario.attests[next_attest].cycle < *next_cycle)) {
      const ScheduledAttest& sa = scenario.attests[next_attest++];
      AttestRecord rec{sa.cycle, sa.request, attestation::attest(state, sa.request), false};
      const Bytes want = expected.read_range(sa.request.region_start, sa.request.region_end);
      rec.verified = attestation::verify_report(expected.key(), sa.request, rec.report, want);
      report.attestations.push_back(rec);
    }
  };

  const auto& trace = scenario.trace;
  answer_before(trace.empty() ? std::nullopt : std::optional(trace.front().cycle));

  bool pox_started = false;
  bool any_violation = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceEvent& te = trace[i];
    const bool last = i + 1 == trace.size();

    if (scenario.pox && !pox_started && te.cycle >= scenario.pox->begin_cycle) {
      attestation::pox_begin(state, scenario.pox->er_min, scenario.pox->er_max);
      pox_started = true;
    }

    CycleRow row;
    row.cycle = te.cycle;
    row.event = te.event;
    row.violations = detector::step(state, te.event);
    row.detect_ctrl = state.ctrl.value();
    report.ctrl_pre_clear |= row.detect_ctrl & CtrlRegister::kDetectMask;
    row.actions = prevention::apply(state, row.violations, scenario.binding);
    row.effect = memory_effect(state, te.event);
    row.ctrl = state.ctrl.value();
    any_violation = any_violation || !row.violations.empty();
    report.rows.push_back(std::move(row));

    if (state.exec_meta.armed && (te.cycle >= scenario.pox->end_cycle || last)) {
      attestation::pox_end(state);
    }
    answer_before(last ? std::nullopt : std::optional(trace[i + 1].cycle));

    if (state.reset_pending) {
      RecoveryEvent ev{te.cycle, RecoveryKind::Reset, state.ctrl.value(), 0, std::nullopt};
      ev.boot = system_reset(state);
      ev.ctrl_after = state.ctrl.value();
      report.recoveries.push_back(ev);
      if (state.boot_failed) {
        report.exit = ExitClass::Unrecoverable;
        finalize(report, state);
        return result;
      }
    } else if (state.recovery_pending) {
      RecoveryEvent ev{te.cycle, RecoveryKind::Reflash, state.ctrl.value(), 0, std::nullopt};
      secureboot::reflash(state);
      ev.ctrl_after = state.ctrl.value();
      report.recoveries.push_back(ev);
    }
  }

  report.exit = any_violation ? ExitClass::Violations : ExitClass::Clean;
  finalize(report, state);
  return result;
}

}  // namespace rares
