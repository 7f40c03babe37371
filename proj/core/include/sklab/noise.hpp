#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sklab {

/// Stateless stream coordinates. Every Gaussian draw is a pure function of
/// (master_seed, particle_index, step_index, domain, slot): no generator
/// state, so any scheduling across workers reproduces the same numbers, and
/// two systems can consume the same Brownian increments by construction.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint32_t particle_index = 0;
  std::uint32_t step_index = 0;
};

/// Counter domains keep draw families disjoint.
enum class NoiseDomain : std::uint32_t {
  kStepNoise = 0,   // joint step triples
  kInitialLaw = 1,  // x0, v0
  kBrownian = 2,    // plain N(0, h) increments
};

/// Two standard normals from one counter block (Philox4x32-10 + Box-Muller).
std::array<double, 2> standard_normal_pair(const RngStream& stream, NoiseDomain domain,
                                           std::uint32_t slot = 0);

/// Exact joint law of the three Gaussian step functionals over [t, t+h]:
///
///   dB    = B_{t+h} - B_t
///   dxi_x = integral of (1 - e^{-beta (t+h-u)}) dB_u   (position noise)
///   dxi_v = beta * integral of e^{-beta (t+h-u)} dB_u  (velocity noise)
///
/// Closed forms (a = beta h, em1 = 1 - e^{-a}, em2 = 1 - e^{-2a}):
///   Var(dB)          = h
///   Var(dxi_x)       = (a - em1 - em1^2/2) / beta
///   Var(dxi_v)       = beta em2 / 2
///   Cov(dB, dxi_x)   = (a - em1) / beta
///   Cov(dB, dxi_v)   = em1
///   Cov(dxi_x,dxi_v) = em1^2 / 2
///
/// The triple is linearly degenerate: dxi_v = beta (dB - dxi_x) exactly, so
/// cov has rank <= 2 and factor carries a zero third column. The factor is
/// assembled from the 2x2 Cholesky of (dB, dxi_x); no jitter is ever needed.
struct StepNoiseModel {
  double beta = 0.0;
  double h = 0.0;
  std::array<std::array<double, 3>, 3> cov{};     // index order: dB, dxi_x, dxi_v
  std::array<std::array<double, 3>, 3> factor{};  // lower triangular, cov = F F^T
};

/// Builds the model. beta must be positive; h = 0 yields the zero model
/// (empty integration interval), h < 0 is a parameter error. The small-a
/// branches evaluate the cancelling differences by series, so the stiff
/// regime (beta h up to ~1e5) and the fine-step regime are both exact to
/// roundoff.
StepNoiseModel step_covariance(double beta, double h);

struct StepTriple {
  double dB = 0.0;
  double dxi_x = 0.0;
  double dxi_v = 0.0;
};

/// factor * (iid standard normals) for the stream's (particle, step) counter.
StepTriple sample_step_noise(const StepNoiseModel& model, const RngStream& stream);

/// n iid N(0, h) increments for steps stream.step_index .. +n-1.
std::vector<double> brownian_increments(const RngStream& stream, double h, int n);

/// 1 - e^{-a}, evaluated as -expm1(-a).
double one_minus_exp_neg(double a);

/// Var of the accumulated position noise over [0, t]: (a - em1 - em1^2/2)/beta
/// with a = beta t. Equals Var(dxi_x) of a single step of width t.
double position_noise_variance(double beta, double t);

/// Cov(B_t, accumulated position noise over [0, t]): (a - em1)/beta.
double brownian_position_covariance(double beta, double t);

}  // namespace sklab
