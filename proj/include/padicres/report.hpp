#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "padicres/spec_io.hpp"

namespace padicres {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitPass = 0, kExitFinding = 1, kExitInvalid = 2 };

/// Command-line overrides applied on top of the spec before validation.
struct RunOverrides {
  std::optional<std::uint32_t> n_max;
  std::optional<std::int64_t> k_max;
  std::optional<int> precision;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  std::string report;  // canonical JSON, trailing newline
  int exit_code = kExitPass;
};

/// Parses, validates, runs every check, and renders the report. Never throws
/// for bad input or failing checks: they land in the report's "errors"
/// section with exit code 2 (invalid input) or 1 (finding).
RunResult run_and_report(const std::string& spec_text, const RunOverrides& overrides = {});

/// Hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace padicres
