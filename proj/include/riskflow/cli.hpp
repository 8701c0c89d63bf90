#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskflow {

/// Runs the `risk` command line. `args` excludes the program name. Output goes
/// to `out`, diagnostics to `err` as "error: <Code>: <message>". Returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace riskflow
