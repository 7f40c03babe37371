#include "sklab/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "sklab/errors.hpp"
#include "sklab/parallel.hpp"
#include "sklab/summation.hpp"

namespace sklab {
namespace {

// Per-block compensated partial sums combined in block order: the mean is a
// pure function of the values, independent of the worker partitioning.
double ensemble_mean(std::span<const double> xs, int workers) {
  const std::size_t n_blocks = reduction_block_count(xs.size());
  std::vector<double> partials(n_blocks, 0.0);
  parallel_blocks(xs.size(), workers, [&](std::size_t b, std::size_t begin, std::size_t end) {
    partials[b] = block_partial_sum(xs, begin, end);
  });
  return combine_block_means(partials, xs.size());
}

// Records the first non-finite particle (lowest index wins deterministically).
struct DivergenceFlag {
  std::atomic<long> particle{-1};

  void mark(long p) {
    long expected = particle.load(std::memory_order_relaxed);
    while ((expected < 0 || p < expected) &&
           !particle.compare_exchange_weak(expected, p, std::memory_order_relaxed)) {
    }
  }

  void raise_if_set(const char* system, long step) const {
    const long p = particle.load(std::memory_order_relaxed);
    if (p >= 0) throw divergence_error(system, p, step);
  }
};

}  // namespace

const char* system_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::kSecondOrder: return "second-order";
    case SystemKind::kLimit: return "limit";
    case SystemKind::kUnscaled: return "unscaled";
  }
  return "?";
}

double InitialLaw::second_moment() const {
  return mean_x * mean_x + var_x + mean_v * mean_v + var_v;
}

void InitialLaw::validate() const {
  if (!(var_x >= 0.0) || !(var_v >= 0.0)) {
    throw parameter_error("initial law: variances must be >= 0");
  }
  if (kind == Kind::kDeterministicPoint && (var_x != 0.0 || var_v != 0.0)) {
    throw parameter_error("initial law: deterministic-point requires zero variances");
  }
  if (!(second_moment_bound >= 0.0)) {
    throw parameter_error("initial law: M must be >= 0");
  }
  if (second_moment() > second_moment_bound * (1.0 + 1e-12)) {
    throw parameter_error("initial law: E[x0^2 + v0^2] = " + std::to_string(second_moment()) +
                          " exceeds declared bound M = " + std::to_string(second_moment_bound));
  }
}

void SimConfig::validate(SystemKind system) const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw parameter_error("config: beta must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw parameter_error("config: T must be > 0");
  if (n_steps < 0) throw parameter_error("config: n_steps must be >= 0");
  if (n_particles < 1) throw parameter_error("config: n_particles must be >= 1");
  init.validate();
  if (n_steps > 0) {
    const double hk = step_size() * kernel.kappa();
    if (hk > 0.1 * (1.0 + 1e-12)) {
      throw parameter_error("config: h * kappa = " + std::to_string(hk) +
                            " exceeds the drift-accuracy requirement 0.1");
    }
  }
  (void)system;
}

void StepNoiseBatch::resize(std::size_t n) {
  dB.resize(n);
  dxi_x.resize(n);
  dxi_v.resize(n);
}

void fill_step_noise(const StepNoiseModel& model, std::uint64_t seed, std::uint32_t step,
                     StepNoiseBatch& batch, int workers) {
  const std::size_t n = batch.dB.size();
  parallel_blocks(n, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    RngStream stream{seed, 0, step};
    for (std::size_t i = begin; i < end; ++i) {
      stream.particle_index = static_cast<std::uint32_t>(i);
      const StepTriple t = sample_step_noise(model, stream);
      batch.dB[i] = t.dB;
      batch.dxi_x[i] = t.dxi_x;
      batch.dxi_v[i] = t.dxi_v;
    }
  });
}

void exact_ou_step(Ensemble& state, const SimConfig& config, const StepNoiseBatch& noise,
                   long step_index, int workers) {
  const double beta = config.beta;
  const double h = config.step_size();
  const double a = beta * h;
  const double decay = std::exp(-a);
  const double em1 = one_minus_exp_neg(a);
  const double v_weight = em1 / beta;                       // old velocity -> position
  const double f_weight = brownian_position_covariance(beta, h);  // (a - em1)/beta = h - em1/beta
  const double mu = state.mu_hat;
  const DriftKernel& kernel = config.kernel;

  DivergenceFlag diverged;
  const std::size_t n = state.x.size();
  parallel_blocks(n, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double force = kernel(state.x[i] - mu);
      const double x_new = state.x[i] + v_weight * state.v[i] + f_weight * force + noise.dxi_x[i];
      const double v_new = decay * state.v[i] + em1 * force + noise.dxi_v[i];
      if (!std::isfinite(x_new) || !std::isfinite(v_new)) diverged.mark(static_cast<long>(i));
      state.x[i] = x_new;
      state.v[i] = v_new;
    }
  });
  diverged.raise_if_set("second-order", step_index);

  state.mu_hat = ensemble_mean(state.x, workers);
  state.t += h;
}

void euler_maruyama_step(Ensemble& state, const SimConfig& config, std::span<const double> dB,
                         long step_index) {
  const double beta = config.beta;
  const double h = config.step_size();
  if (beta * h >= 0.5) {
    throw parameter_error("euler_maruyama_step: beta * h = " + std::to_string(beta * h) +
                          " violates the stability guard beta * h < 0.5");
  }
  const double mu = state.mu_hat;
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double force = config.kernel(state.x[i] - mu);
    const double x_new = state.x[i] + state.v[i] * h;
    const double v_new = state.v[i] - beta * state.v[i] * h + beta * force * h + beta * dB[i];
    if (!std::isfinite(x_new) || !std::isfinite(v_new)) {
      throw divergence_error("second-order (euler)", static_cast<long>(i), step_index);
    }
    state.x[i] = x_new;
    state.v[i] = v_new;
  }
  state.mu_hat = ensemble_mean(state.x, 1);
  state.t += h;
}

void limit_step(Ensemble& state, const DriftKernel& kernel, double h, std::span<const double> dB,
                long step_index, int workers) {
  if (!(h > 0.0)) throw parameter_error("limit_step: h must be > 0");
  if (h * kernel.kappa() > 0.1 * (1.0 + 1e-12)) {
    throw parameter_error("limit_step: h * kappa exceeds the drift-accuracy requirement 0.1");
  }
  const double mu = state.mu_hat;
  DivergenceFlag diverged;
  parallel_blocks(state.x.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double y_new = state.x[i] + kernel(state.x[i] - mu) * h + dB[i];
      if (!std::isfinite(y_new)) diverged.mark(static_cast<long>(i));
      state.x[i] = y_new;
    }
  });
  diverged.raise_if_set("limit", step_index);

  state.mu_hat = ensemble_mean(state.x, workers);
  state.t += h;
}

Ensemble make_initial_ensemble(const SimConfig& config, SystemKind system) {
  const int n = config.n_particles;
  Ensemble state;
  state.t = 0.0;
  state.x.resize(n);
  if (system != SystemKind::kLimit) state.v.resize(n);

  const InitialLaw& law = config.init;
  const double sd_x = std::sqrt(law.var_x);
  const double sd_v = std::sqrt(law.var_v);
  for (int i = 0; i < n; ++i) {
    double x0 = law.mean_x;
    double v0 = law.mean_v;
    if (law.kind == InitialLaw::Kind::kGaussian) {
      const auto z = standard_normal_pair(
          RngStream{config.seed, static_cast<std::uint32_t>(i), 0}, NoiseDomain::kInitialLaw);
      x0 += sd_x * z[0];
      v0 += sd_v * z[1];
    }
    state.x[i] = x0;
    if (!state.v.empty()) state.v[i] = v0;
  }
  state.mu_hat = ensemble_mean(state.x, 1);
  return state;
}

namespace {

PathBundle make_bundle(const SimConfig& config, SystemKind system) {
  PathBundle bundle;
  bundle.system = system;
  bundle.config = config;
  bundle.n_particles = config.n_particles;
  bundle.n_steps = config.n_steps;
  const double h = config.n_steps > 0 ? config.step_size() : 0.0;
  bundle.grid.resize(config.n_steps + 1);
  for (int k = 0; k <= config.n_steps; ++k) bundle.grid[k] = static_cast<double>(k) * h;
  bundle.x.resize(static_cast<std::size_t>(config.n_particles) * (config.n_steps + 1));
  if (system != SystemKind::kLimit) bundle.v.resize(bundle.x.size());
  bundle.mean_x.resize(config.n_steps + 1);
  return bundle;
}

void record(PathBundle& bundle, const Ensemble& state, int k) {
  for (int p = 0; p < bundle.n_particles; ++p) {
    bundle.x[bundle.idx(p, k)] = state.x[p];
    if (!bundle.v.empty()) bundle.v[bundle.idx(p, k)] = state.v[p];
  }
  bundle.mean_x[k] = state.mu_hat;
}

}  // namespace

PathBundle simulate(const SimConfig& config, SystemKind system, int workers) {
  if (system == SystemKind::kUnscaled) {
    throw parameter_error("simulate: use unscaled_simulate for the unscaled system");
  }
  config.validate(system);

  PathBundle bundle = make_bundle(config, system);
  Ensemble state = make_initial_ensemble(config, system);
  record(bundle, state, 0);
  if (config.n_steps == 0) return bundle;

  const double h = config.step_size();
  const StepNoiseModel model = step_covariance(config.beta, h);
  StepNoiseBatch batch;
  batch.resize(config.n_particles);

  for (int k = 0; k < config.n_steps; ++k) {
    fill_step_noise(model, config.seed, static_cast<std::uint32_t>(k), batch, workers);
    if (system == SystemKind::kSecondOrder) {
      exact_ou_step(state, config, batch, k, workers);
    } else {
      limit_step(state, config.kernel, h, batch.dB, k, workers);
    }
    state.t = bundle.grid[k + 1];
    record(bundle, state, k + 1);
  }
  return bundle;
}

}  // namespace sklab
