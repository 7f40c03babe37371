#pragma once

#include <string>
#include <vector>

#include "sklab/config.hpp"

namespace sklab::cli {

/// Exit status contract: parse problems are distinguishable from failed
/// validations.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Full command-line entry point (subcommands simulate, converge,
/// validate-bounds, scaling-check). Worker count: --workers, else the
/// SKLAB_THREADS environment variable, else 1.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Subcommand bodies, callable in-process. Each writes its outputs plus a
/// manifest into config.output_dir and returns an exit status.
int cmd_simulate(const CliConfig& config, int workers);
int cmd_converge(const CliConfig& config, int workers);
int cmd_validate_bounds(const CliConfig& config, int workers);
int cmd_scaling_check(const CliConfig& config, int workers);

}  // namespace sklab::cli
