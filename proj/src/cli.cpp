#include "rares/cli.hpp"

#include <charconv>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "rares/attestation.hpp"
#include "rares/report.hpp"
#include "rares/scenario.hpp"

namespace rares::cli {

namespace {

struct Options {
  std::string scenario_path;
  std::string format = "text";
  bool snapshot_pre_clear = false;
  std::string nonce_hex;
  std::string start;
  std::string end;
  bool require_exec = false;
};

std::optional<Scenario> load(const Options& opt, std::ostream& err) {
  try {
    return load_scenario(opt.scenario_path);
  } catch (const Error& e) {
    err << "error: " << opt.scenario_path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

std::optional<Addr> parse_addr(std::string_view text) {
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
    base = 16;
  }
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value > 0xFFFF) {
    return std::nullopt;
  }
  return static_cast<Addr>(value);
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  auto scenario = load(opt, err);
  if (!scenario) return kUsageError;
  const RunReport report = run(*scenario);
  const RenderOptions render{opt.snapshot_pre_clear};
  out << (opt.format == "json" ? render_json(report, render) : render_text(report, render));
  switch (report.exit) {
    case ExitClass::Clean: return kClean;
    case ExitClass::Violations: return kViolations;
    case ExitClass::Unrecoverable: return kUnrecoverable;
  }
  return kUsageError;
}

int cmd_boot(const Options& opt, std::ostream& out, std::ostream& err) {
  auto scenario = load(opt, err);
  if (!scenario) return kUsageError;
  DeviceState state = scenario->initial_state();
  const BootReport boot = secureboot::fsbl_boot(state);
  out << (opt.format == "json" ? render_boot_json(boot) : render_boot_text(boot));
  return boot.outcome == BootOutcome::Unrecoverable ? kUnrecoverable : kClean;
}

int cmd_attest(const Options& opt, std::ostream& out, std::ostream& err) {
  AttestRequest request;
  try {
    std::string_view hex = opt.nonce_hex;
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    const Bytes nonce = from_hex(hex);
    if (nonce.size() != kNonceSize) {
      err << "error: nonce must be 32 bytes (64 hex digits), got " << nonce.size() << " bytes\n";
      return kUsageError;
    }
    std::copy(nonce.begin(), nonce.end(), request.nonce.begin());
  } catch (const HexError& e) {
    err << "error: malformed nonce: " << e.what() << '\n';
    return kUsageError;
  }
  const auto start = parse_addr(opt.start);
  const auto end = parse_addr(opt.end);
  if (!start || !end) {
    err << "error: --start/--end must be 16-bit addresses\n";
    return kUsageError;
  }
  request.region_start = *start;
  request.region_end = *end;

  auto scenario = load(opt, err);
  if (!scenario) return kUsageError;

  const DeviceState expected = scenario->provisioned();
  Bytes expected_region;
  try {
    expected_region = expected.read_range(request.region_start, request.region_end);
  } catch (const UnmappedAddress& e) {
    err << "error: bad bounds: " << e.what() << '\n';
    return kUsageError;
  }

  RunResult result = execute(*scenario);
  if (result.report.exit == ExitClass::Unrecoverable) {
    out << (opt.format == "json" ? render_boot_json(result.report.boot)
                                 : render_boot_text(result.report.boot));
    err << "device did not reach normal operation; nothing to attest\n";
    return kUnrecoverable;
  }

  // Verifier and prover talk through framed messages on a loopback link.
  attestation::LoopbackChannel to_prover;
  attestation::LoopbackChannel to_verifier;
  to_prover.send(attestation::encode_frame(request));

  const auto challenge = to_prover.receive();
  const auto& received = std::get<AttestRequest>(*challenge);
  to_verifier.send(attestation::encode_frame(attestation::attest(result.state, received)));

  const auto response = to_verifier.receive();
  AttestVerdict verdict;
  verdict.request = request;
  verdict.report = std::get<AttestReport>(*response);
  verdict.policy = opt.require_exec ? ExecPolicy::RequireExec : ExecPolicy::Ignore;
  verdict.verified = attestation::verify_report(expected.key(), request, verdict.report,
                                                expected_region, verdict.policy);

  out << (opt.format == "json" ? render_attest_json(verdict) : render_attest_text(verdict));
  return verdict.verified ? kClean : kViolations;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // RARES_SIM_SEED is reserved; the simulator core is deterministic and
  // does not read it.

  CLI::App app{"Trace-driven simulator of a runtime-attack-resilient embedded device"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", opt.scenario_path, "Scenario file (.rares.json)")->required();
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Boot the device and replay the scenario trace");
  add_common(run_cmd);
  run_cmd->add_flag("--snapshot-pre-clear", opt.snapshot_pre_clear,
                    "Report the detection register as accumulated before recovery clears");

  CLI::App* boot_cmd = app.add_subcommand("boot", "Run only the first-stage secure boot");
  add_common(boot_cmd);

  CLI::App* attest_cmd = app.add_subcommand("attest", "Run the scenario, then answer one attestation challenge");
  add_common(attest_cmd);
  attest_cmd->add_option("--nonce", opt.nonce_hex, "32-byte nonce as 64 hex digits")->required();
  attest_cmd->add_option("--start", opt.start, "First address of the attested region")->required();
  attest_cmd->add_option("--end", opt.end, "Last address of the attested region (inclusive)")->required();
  attest_cmd->add_flag("--require-exec", opt.require_exec, "Reject reports whose EXEC flag is clear");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kClean;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kClean;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  if (run_cmd->parsed()) return cmd_run(opt, out, err);
  if (boot_cmd->parsed()) return cmd_boot(opt, out, err);
  return cmd_attest(opt, out, err);
}

}  // namespace rares::cli
