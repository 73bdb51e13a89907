#pragma once

#include <string>

#include "rares/scenario.hpp"

namespace rares {

struct RenderOptions {
  /// Include the accumulated pre-recovery detection register.
  bool snapshot_pre_clear = false;
};

/// Machine form: pretty-printed JSON with a fixed key order, so identical
/// runs render byte-identically.
std::string render_json(const RunReport& report, const RenderOptions& options = {});
std::string render_text(const RunReport& report, const RenderOptions& options = {});

std::string render_boot_json(const BootReport& boot);
std::string render_boot_text(const BootReport& boot);

struct AttestVerdict {
  AttestRequest request;
  AttestReport report;
  bool verified = false;
  ExecPolicy policy = ExecPolicy::Ignore;
};

std::string render_attest_json(const AttestVerdict& verdict);
std::string render_attest_text(const AttestVerdict& verdict);

}  // namespace rares
