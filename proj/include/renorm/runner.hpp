#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "renorm/config.hpp"
#include "renorm/diagnostics.hpp"

namespace renorm {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int diagnostic_failure = 1;
inline constexpr int bad_input = 2;
inline constexpr int nonconvergence = 3;
}  // namespace exit_code

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  /// Upper bound on concurrently running solves; 0 uses the OpenMP default.
  int max_threads = 0;
};

struct RunOutcome {
  int exit_code = exit_code::ok;
  DiagnosticsReport report;
  std::string output_dir;
};

/// Solve every eps level (plus the refinements and second runs the requested diagnostics
/// need), evaluate the diagnostics and write snapshots, diagnostics.csv, summary.txt and
/// effective.cfg into the output directory. Progress goes to `log` unless quiet, errors to `err`.
RunOutcome run(RunConfig cfg, const RunOptions& options, std::ostream& log, std::ostream& err);

/// 64-bit FNV-1a digest in hex.
std::string digest(const std::string& text);

}  // namespace renorm
