#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "spinwave/config.hpp"
#include "spinwave/output.hpp"

namespace spinwave {

enum ExitCode : int { kExitOk = 0, kExitInstability = 1, kExitConfig = 2 };

const std::vector<std::string>& subcommands();

/// Computes the primary output of a subcommand. Throws on failure.
Table run_table(const std::string& command, const RunConfig& config);

/// Runs a subcommand, writes its output to `out` (or config.output) and maps
/// failures to exit codes with the message on `err`.
int dispatch(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace spinwave
