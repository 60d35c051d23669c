#pragma once

// `tp solve|sweep|decompose|verify <scenario.json> [flags]`

#include <ostream>
#include <string>
#include <vector>

namespace tp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kVerificationMismatch = 2,
  kIoError = 3,
};

/// Runs one invocation. `args` excludes the program name. Every subcommand
/// appends a RunRecord to runs/manifest.log under the current directory
/// unless --no-manifest is given. Never returns a value outside ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tp::cli
