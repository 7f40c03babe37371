#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sklab/ensemble.hpp"

namespace sklab {

struct KernelConfig {
  std::string name;            // zero | linear | tanh | clamp
  std::vector<double> params;  // kernel-specific
  std::optional<double> kappa; // overrides the builtin Lipschitz constant
};

struct ScalingConfig {
  double gamma = 1.0;
  std::optional<double> beta;      // direct-system beta; defaults to gamma^2
  std::vector<double> checkpoints; // defaults to {0.25, 0.5, 1.0} * T
};

/// Parsed experiment config (INI-style sections kernel/sim/init/output and
/// the optional scaling section used by the scaling-check command).
struct CliConfig {
  KernelConfig kernel;

  std::optional<double> beta;
  std::vector<double> beta_grid;
  double horizon = 1.0;
  int n_steps = 1;
  int n_particles = 1;
  std::uint64_t seed = 0;
  std::string system = "second-order";      // second-order | limit
  std::string n_steps_policy = "fixed";     // fixed | scale-with-beta

  InitialLaw init;

  std::string output_dir;

  std::optional<ScalingConfig> scaling;
};

/// Parses and validates a config file / text. Throws config_error carrying
/// the offending field and the line number.
CliConfig parse_config_file(const std::string& path);
CliConfig parse_config_text(const std::string& text, const std::string& origin);

/// Normalized INI echo of a config; reparses to an equivalent config. This is
/// what the run manifest embeds.
std::string render_config_ini(const CliConfig& config);

/// Builds the kernel; wraps unknown names / bad parameter counts and a failed
/// Lipschitz declaration into config_error.
DriftKernel build_kernel(const KernelConfig& kernel);

/// Assembles the single-beta SimConfig (config_error when sim.beta is absent).
SimConfig build_sim_config(const CliConfig& config);

}  // namespace sklab
