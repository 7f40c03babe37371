#pragma once

#include <vector>

#include "sklab/ensemble.hpp"
#include "sklab/stats.hpp"

namespace sklab {

/// The second-order system x and the limit system y driven by the same
/// Brownian source per particle: one joint triple (dB, dxi_x, dxi_v) is drawn
/// per (particle, step); x consumes the correlated (dxi_x, dxi_v) components,
/// y consumes dB. y0 = x0 per particle.
struct CoupledRun {
  SimConfig config;
  PathBundle x_bundle;
  PathBundle y_bundle;
  std::vector<double> sup_sq_errors;  // per particle: max over the grid of (x - y)^2
};

CoupledRun coupled_simulate(const SimConfig& config, int workers = 1);

/// Per-particle max over grid points of (x - y)^2. Throws contract_error when
/// the bundles do not share a grid.
std::vector<double> sup_sq_error(const PathBundle& x_bundle, const PathBundle& y_bundle);
std::vector<double> sup_sq_error(const CoupledRun& run);

// estimate_error(samples) in stats.hpp turns sup_sq_errors into the
// Monte-Carlo estimate of the strong error functional.

}  // namespace sklab
