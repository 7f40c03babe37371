#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sklab/kernel.hpp"
#include "sklab/noise.hpp"

namespace sklab {

enum class SystemKind {
  kSecondOrder,  // dx = v dt, dv = -beta v dt + beta K(x - mean) dt + beta dB
  kLimit,        // dy = K(y - mean) dt + dB
  kUnscaled,     // dx = v dt, dv = -gamma v dt + K(x - mean) dt + sqrt(gamma) dB
};

const char* system_name(SystemKind kind);

struct InitialLaw {
  enum class Kind { kDeterministicPoint, kGaussian };

  Kind kind = Kind::kDeterministicPoint;
  double mean_x = 0.0;
  double mean_v = 0.0;
  double var_x = 0.0;
  double var_v = 0.0;
  double second_moment_bound = 1.0;  // declared M with E[x0^2 + v0^2] <= M

  double second_moment() const;  // mean_x^2 + var_x + mean_v^2 + var_v
  /// Throws parameter_error when variances are negative, the point law has
  /// nonzero variance, or the second moment exceeds the declared bound.
  void validate() const;
};

struct SimConfig {
  double beta = 1.0;
  DriftKernel kernel = zero_kernel();
  double horizon = 1.0;  // T
  int n_steps = 1;       // uniform grid, h = T / n_steps
  int n_particles = 1;   // N
  InitialLaw init;
  std::uint64_t seed = 0;

  double step_size() const { return horizon / n_steps; }
  /// Validates ranges and the drift-accuracy requirement h * kappa <= 0.1.
  /// There is no step restriction in beta: the exponential step is exact in
  /// the linear part.
  void validate(SystemKind system) const;
};

/// N interacting particles at one time point. The limit system uses x only.
struct Ensemble {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;
  double mu_hat = 0.0;  // fixed-block compensated mean of x
};

/// Full trajectory record on the uniform grid, particle-major storage.
struct PathBundle {
  SystemKind system = SystemKind::kSecondOrder;
  SimConfig config;
  int n_particles = 0;
  int n_steps = 0;
  std::vector<double> grid;    // grid[k] = k * h
  std::vector<double> x;       // [particle][grid point]; holds y for the limit system
  std::vector<double> v;       // empty for the limit system
  std::vector<double> mean_x;  // ensemble mean at every grid point

  double x_at(int particle, int k) const { return x[idx(particle, k)]; }
  double v_at(int particle, int k) const { return v[idx(particle, k)]; }
  std::span<const double> x_path(int particle) const {
    return {x.data() + static_cast<std::size_t>(particle) * (n_steps + 1),
            static_cast<std::size_t>(n_steps + 1)};
  }
  std::size_t idx(int particle, int k) const {
    return static_cast<std::size_t>(particle) * (n_steps + 1) + static_cast<std::size_t>(k);
  }
};

/// One step's noise for the whole ensemble, struct-of-arrays.
struct StepNoiseBatch {
  std::vector<double> dB;
  std::vector<double> dxi_x;
  std::vector<double> dxi_v;

  void resize(std::size_t n);
};

/// Fills the batch from the joint law for (seed, particle 0..N-1, step).
void fill_step_noise(const StepNoiseModel& model, std::uint64_t seed, std::uint32_t step,
                     StepNoiseBatch& batch, int workers = 1);

/// Exponential (exact Ornstein-Uhlenbeck) step of the second-order system.
/// K and the ensemble mean are frozen at the step start; the linear part and
/// the noise are integrated exactly:
///   v <- e^{-a} v + (1 - e^{-a}) F + dxi_v
///   x <- x + (1 - e^{-a})/beta v_old + (h - (1 - e^{-a})/beta) F + dxi_x
/// with a = beta h, F = K(x_old - mu_hat). mu_hat is recomputed afterwards.
void exact_ou_step(Ensemble& state, const SimConfig& config, const StepNoiseBatch& noise,
                   long step_index, int workers = 1);

/// Reference Euler-Maruyama step of the same system. Guarded by beta h < 0.5.
///   x <- x + v h;  v <- v - beta v h + beta K(x_old - mu_hat) h + beta dB
void euler_maruyama_step(Ensemble& state, const SimConfig& config, std::span<const double> dB,
                         long step_index);

/// Euler-Maruyama step of the limit equation: y <- y + K(y - mu_hat) h + dB.
void limit_step(Ensemble& state, const DriftKernel& kernel, double h, std::span<const double> dB,
                long step_index, int workers = 1);

/// Draws (x0, v0) per particle from the initial law (counter domain disjoint
/// from all Brownian draws). The limit system receives the same x0 values.
Ensemble make_initial_ensemble(const SimConfig& config, SystemKind system);

/// Integrates the chosen system on the uniform grid. Deterministic in the
/// seed for any worker count. n_steps = 0 records only the initial state.
PathBundle simulate(const SimConfig& config, SystemKind system, int workers = 1);

}  // namespace sklab
