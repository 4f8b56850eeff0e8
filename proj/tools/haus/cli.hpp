#pragma once

// The `haus` command line: argument handling, output emission and the canned example bundle.
// Everything is reachable in-process so tests can drive it without spawning the executable.

#include <ostream>
#include <string>
#include <vector>

namespace haus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Runs one command; `args` excludes the program name. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Appends the entries of the JSON object in the `--config` file as flags, so they take
/// precedence over flags given on the command line. Raises InvalidInput or IoError.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

struct ExperimentOutcome {
  std::string directory;
  std::string name;
  /// Acceptance criteria this experiment provides evidence for.
  std::vector<int> criteria;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct BundleResult {
  std::vector<ExperimentOutcome> outcomes;
  double seconds = 0.0;

  bool passed() const;
  /// True when every experiment tagged with `criterion` passed (false if none is tagged).
  bool criterion_passed(int criterion) const;
};

/// Runs the canned suite and writes one directory per example family under `out_dir`,
/// plus summary.json. Progress lines go to `log`.
BundleResult run_examples(const std::string& out_dir, std::ostream& log);

/// The example directories, in the order they are produced.
std::vector<std::string> example_directories();

}  // namespace haus::cli
