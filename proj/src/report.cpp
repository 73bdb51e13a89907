#include "rares/report.hpp"

#include <sstream>

#include <json.hpp>

namespace rares {

namespace {

using ojson = nlohmann::ordered_json;

ojson kinds_json(ViolationSet set) {
  ojson arr = ojson::array();
  for (ViolationKind k : set.kinds()) arr.push_back(std::string(kind_name(k)));
  return arr;
}

std::string kinds_text(ViolationSet set) {
  std::string out;
  for (ViolationKind k : set.kinds()) {
    if (!out.empty()) out += ',';
    out += kind_name(k);
  }
  return out.empty() ? "-" : out;
}

ojson boot_json(const BootReport& boot) {
  ojson j;
  j["outcome"] = std::string(boot_outcome_name(boot.outcome));
  j["attempts"] = boot.attempt_count();
  ojson digests = ojson::array();
  for (const BootAttempt& a : boot.attempts) {
    digests.push_back({{"computed", to_hex(a.computed)},
                       {"reference", to_hex(a.reference)},
                       {"match", a.matched}});
  }
  j["digests"] = std::move(digests);
  return j;
}

ojson event_json(const AccessEvent& e) {
  return {{"pc", hex16(e.pc)},         {"irq", e.irq},     {"ren", e.ren},
          {"wen", e.wen},              {"daddr", hex16(e.daddr)}, {"dma_en", e.dma_en},
          {"dma_addr", hex16(e.dma_addr)}, {"data", hex8(e.data)}};
}

ojson attest_json(const AttestRequest& req, const AttestReport& rep) {
  return {{"nonce", to_hex(req.nonce)},
          {"region", {hex16(req.region_start), hex16(req.region_end)}},
          {"exec_flag", rep.exec_flag},
          {"er_min", hex16(rep.er_min)},
          {"er_max", hex16(rep.er_max)},
          {"tag", to_hex(rep.tag)}};
}

void boot_text(std::ostream& out, const BootReport& boot, const char* indent) {
  out << indent << "boot: " << boot_outcome_name(boot.outcome) << " (attempts=" << boot.attempt_count()
      << ")";
  if (boot.outcome == BootOutcome::RecoveredThenVerified) out << " recovered from golden image";
  out << '\n';
  for (std::size_t i = 0; i < boot.attempts.size(); ++i) {
    const BootAttempt& a = boot.attempts[i];
    out << indent << "  attempt " << i + 1 << ": " << (a.matched ? "match   " : "MISMATCH")
        << " computed=" << to_hex(a.computed) << '\n'
        << indent << "                      reference=" << to_hex(a.reference) << '\n';
  }
}

}  // namespace

std::string render_json(const RunReport& report, const RenderOptions& options) {
  ojson j;
  j["scenario"] = report.scenario;
  j["boot"] = boot_json(report.boot);

  ojson rows = ojson::array();
  for (const CycleRow& row : report.rows) {
    ojson actions = ojson::array();
    for (const ActionRecord& a : row.actions) {
      actions.push_back({{"action", action_name(a.action)},
                         {"triggers", kinds_json(a.triggers)},
                         {"applied", a.applied}});
    }
    rows.push_back({{"cycle", row.cycle},
                    {"event", summarize(row.event)},
                    {"signals", event_json(row.event)},
                    {"violations", kinds_json(row.violations)},
                    {"detect", hex16(row.detect_ctrl)},
                    {"ctrl", hex16(row.ctrl)},
                    {"ctrl_bits", describe_ctrl(row.ctrl)},
                    {"actions", std::move(actions)},
                    {"effect", std::string(effect_name(row.effect))}});
  }
  j["rows"] = std::move(rows);

  ojson recoveries = ojson::array();
  for (const RecoveryEvent& r : report.recoveries) {
    ojson rec = {{"after_cycle", r.after_cycle},
                 {"kind", r.kind == RecoveryKind::Reflash ? "reflash" : "reset"},
                 {"ctrl_before", hex16(r.ctrl_before)},
                 {"ctrl_after", hex16(r.ctrl_after)}};
    if (r.boot) rec["boot"] = boot_json(*r.boot);
    recoveries.push_back(std::move(rec));
  }
  j["recoveries"] = std::move(recoveries);

  ojson attests = ojson::array();
  for (const AttestRecord& a : report.attestations) {
    ojson rec = {{"cycle", a.cycle}};
    rec.update(attest_json(a.request, a.report));
    rec["verified"] = a.verified;
    attests.push_back(std::move(rec));
  }
  j["attestations"] = std::move(attests);

  ojson fin;
  fin["ctrl"] = hex16(report.final_ctrl);
  fin["ctrl_bits"] = describe_ctrl(report.final_ctrl);
  fin["r2"] = hex16(report.final_r2.bits);
  fin["mode"] = std::string(power_mode_name(report.final_r2.mode()));
  fin["cpu_halted"] = report.final_cpu_halted;
  fin["chip_gate_active"] = report.final_chip_gate_active;
  fin["exec_flag"] = report.final_exec_flag;
  ojson digests;
  for (const auto& [kind, digest] : report.final_digests) {
    digests[std::string(region_name(kind))] = to_hex(digest);
  }
  fin["sha256"] = std::move(digests);
  j["final"] = std::move(fin);

  if (options.snapshot_pre_clear) j["ctrl_pre_clear"] = hex16(report.ctrl_pre_clear);
  j["exit"] = std::string(exit_class_name(report.exit));
  return j.dump(2) + "\n";
}

std::string render_text(const RunReport& report, const RenderOptions& options) {
  std::ostringstream out;
  out << "scenario: " << (report.scenario.empty() ? "(unnamed)" : report.scenario) << '\n';
  boot_text(out, report.boot, "");

  std::size_t next_recovery = 0;
  for (const CycleRow& row : report.rows) {
    out << "cycle " << row.cycle << ": " << summarize(row.event) << "  viol=" << kinds_text(row.violations)
        << "  ctrl=" << describe_ctrl(row.ctrl) << "  mem=" << effect_name(row.effect);
    for (const ActionRecord& a : row.actions) {
      out << "  action=" << action_name(a.action) << (a.applied ? "" : "(subsumed)");
    }
    out << '\n';
    while (next_recovery < report.recoveries.size() &&
           report.recoveries[next_recovery].after_cycle == row.cycle) {
      const RecoveryEvent& r = report.recoveries[next_recovery++];
      out << "  -- " << (r.kind == RecoveryKind::Reflash ? "recovery: reflash from golden image" : "system reset")
          << ", ctrl " << hex16(r.ctrl_before) << " -> " << hex16(r.ctrl_after) << '\n';
      if (r.boot) boot_text(out, *r.boot, "     ");
    }
  }

  for (const AttestRecord& a : report.attestations) {
    out << "attest @" << a.cycle << ": region " << hex16(a.request.region_start) << "-"
        << hex16(a.request.region_end) << " exec_flag=" << (a.report.exec_flag ? "true" : "false")
        << " er=" << hex16(a.report.er_min) << "-" << hex16(a.report.er_max)
        << " tag=" << to_hex(a.report.tag) << " verified: " << (a.verified ? "true" : "false") << '\n';
  }

  out << "final ctrl: " << describe_ctrl(report.final_ctrl) << '\n';
  out << "final r2: " << hex16(report.final_r2.bits) << " (" << power_mode_name(report.final_r2.mode())
      << ")  cpu_halted=" << (report.final_cpu_halted ? "true" : "false")
      << "  chip_gate=" << (report.final_chip_gate_active ? "true" : "false")
      << "  exec_flag=" << (report.final_exec_flag ? "true" : "false") << '\n';
  if (options.snapshot_pre_clear) out << "ctrl pre-clear: " << describe_ctrl(report.ctrl_pre_clear) << '\n';
  out << "exit: " << exit_class_name(report.exit) << '\n';
  return out.str();
}

std::string render_boot_json(const BootReport& boot) {
  ojson j = boot_json(boot);
  j["recovered"] = boot.outcome == BootOutcome::RecoveredThenVerified;
  return j.dump(2) + "\n";
}

std::string render_boot_text(const BootReport& boot) {
  std::ostringstream out;
  boot_text(out, boot, "");
  return out.str();
}

std::string render_attest_json(const AttestVerdict& v) {
  ojson j = attest_json(v.request, v.report);
  j["policy"] = v.policy == ExecPolicy::RequireExec ? "require-exec" : "ignore-exec";
  j["verified"] = v.verified;
  return j.dump(2) + "\n";
}

std::string render_attest_text(const AttestVerdict& v) {
  std::ostringstream out;
  out << "nonce: " << to_hex(v.request.nonce) << '\n'
      << "region: " << hex16(v.request.region_start) << "-" << hex16(v.request.region_end) << '\n'
      << "exec_flag: " << (v.report.exec_flag ? "true" : "false") << '\n'
      << "er: " << hex16(v.report.er_min) << "-" << hex16(v.report.er_max) << '\n'
      << "tag: " << to_hex(v.report.tag) << '\n'
      << "verified: " << (v.verified ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace rares
