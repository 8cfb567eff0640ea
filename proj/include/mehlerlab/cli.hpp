#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mehler {

/// Runs one CLI invocation (args exclude the program name) and returns the
/// process exit code: 0 success, 1 verification failures, 2 config error,
/// 3 numerical error. Streams are injected so tests can drive the real path.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mehler
