#pragma once

#include <array>
#include <span>
#include <vector>

#include "sklab/ensemble.hpp"

namespace sklab {

/// Time-change map between the unscaled oscillator and the beta = gamma^2
/// system: x'(t') = x(gamma t'), v'(t') = gamma v(gamma t').
struct ScalingMap {
  double gamma = 1.0;
  double beta() const { return gamma * gamma; }
};

/// Integrates dx = v dt, dv = -gamma v dt + K(x - mean) dt + sqrt(gamma) dB
/// on the original-time interval [0, gamma * t_prime] with an exact
/// exponential step (same joint noise law with rate gamma, noise components
/// scaled by 1/sqrt(gamma)).
PathBundle unscaled_simulate(double gamma, const DriftKernel& kernel, double t_prime,
                             int n_steps, int n_particles, const InitialLaw& init,
                             std::uint64_t seed, int workers = 1);

/// Applies the map to a stored bundle: grid divided by gamma, x copied,
/// v multiplied by gamma. gamma = 1 is the identity.
PathBundle time_change(const PathBundle& bundle, double gamma);

struct CheckpointReport {
  double t = 0.0;
  double ks_distance = 0.0;
  double ks_critical = 0.0;
  std::array<double, 4> moment_diff{};  // raw moments 1..4, |m_a - m_b|
  std::array<double, 4> moment_se{};    // combined standard errors
  bool passes = false;
};

struct MatchReport {
  double alpha = 0.01;
  std::vector<CheckpointReport> checkpoints;
  bool passes = false;
};

/// Marginal equality-in-law check on x at the given checkpoints: two-sample
/// KS at level alpha plus raw moments up to order 4 within four combined
/// standard errors. The bundles must be independent simulations; checkpoints
/// must lie on both grids (contract_error otherwise).
MatchReport distribution_match(const PathBundle& a, const PathBundle& b,
                               std::span<const double> checkpoints, double alpha = 0.01);

}  // namespace sklab
