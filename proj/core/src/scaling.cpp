#include "sklab/scaling.hpp"

#include <cmath>

#include "sklab/errors.hpp"
#include "sklab/parallel.hpp"
#include "sklab/stats.hpp"
#include "sklab/summation.hpp"

namespace sklab {
namespace {

int checkpoint_index(const PathBundle& bundle, double t) {
  if (bundle.n_steps == 0) {
    if (std::abs(t) <= 1e-12) return 0;
    throw contract_error("distribution_match: checkpoint off the grid");
  }
  const double h = bundle.grid[1] - bundle.grid[0];
  const long k = std::lround(t / h);
  if (k < 0 || k > bundle.n_steps || std::abs(bundle.grid[k] - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw contract_error("distribution_match: checkpoint " + std::to_string(t) +
                         " is not a grid point");
  }
  return static_cast<int>(k);
}

std::vector<double> column(const PathBundle& bundle, int k) {
  std::vector<double> xs(bundle.n_particles);
  for (int p = 0; p < bundle.n_particles; ++p) xs[p] = bundle.x_at(p, k);
  return xs;
}

}  // namespace

PathBundle unscaled_simulate(double gamma, const DriftKernel& kernel, double t_prime,
                             int n_steps, int n_particles, const InitialLaw& init,
                             std::uint64_t seed, int workers) {
  if (!(gamma > 0.0)) throw parameter_error("unscaled_simulate: gamma must be > 0");
  if (!(t_prime > 0.0)) throw parameter_error("unscaled_simulate: t_prime must be > 0");

  SimConfig config;
  config.beta = gamma;  // friction rate of the unscaled Langevin line
  config.kernel = kernel;
  config.horizon = gamma * t_prime;  // original time
  config.n_steps = n_steps;
  config.n_particles = n_particles;
  config.init = init;
  config.seed = seed;
  config.validate(SystemKind::kUnscaled);

  PathBundle bundle;
  bundle.system = SystemKind::kUnscaled;
  bundle.config = config;
  bundle.n_particles = n_particles;
  bundle.n_steps = n_steps;
  const double h = n_steps > 0 ? config.step_size() : 0.0;
  bundle.grid.resize(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) bundle.grid[k] = static_cast<double>(k) * h;
  bundle.x.resize(static_cast<std::size_t>(n_particles) * (n_steps + 1));
  bundle.v.resize(bundle.x.size());
  bundle.mean_x.resize(n_steps + 1);

  Ensemble state = make_initial_ensemble(config, SystemKind::kUnscaled);
  auto record = [&](int k) {
    for (int p = 0; p < n_particles; ++p) {
      bundle.x[bundle.idx(p, k)] = state.x[p];
      bundle.v[bundle.idx(p, k)] = state.v[p];
    }
    bundle.mean_x[k] = state.mu_hat;
  };
  record(0);
  if (n_steps == 0) return bundle;

  // dv = -gamma v dt + K dt + sqrt(gamma) dB, integrated exactly in the
  // linear part. Same joint noise law at rate gamma; the sqrt(gamma) noise
  // coefficient scales both convolution components by 1/sqrt(gamma).
  const StepNoiseModel model = step_covariance(gamma, h);
  const double a = gamma * h;
  const double decay = std::exp(-a);
  const double em1 = one_minus_exp_neg(a);
  const double v_weight = em1 / gamma;
  const double f_weight_v = em1 / gamma;
  const double f_weight_x = brownian_position_covariance(gamma, h) / gamma;  // (a - em1)/gamma^2
  const double noise_scale = 1.0 / std::sqrt(gamma);

  StepNoiseBatch batch;
  batch.resize(n_particles);
  for (int k = 0; k < n_steps; ++k) {
    fill_step_noise(model, seed, static_cast<std::uint32_t>(k), batch, workers);
    const double mu = state.mu_hat;
    for (int i = 0; i < n_particles; ++i) {
      const double force = kernel(state.x[i] - mu);
      const double x_new = state.x[i] + v_weight * state.v[i] + f_weight_x * force +
                           noise_scale * batch.dxi_x[i];
      const double v_new =
          decay * state.v[i] + f_weight_v * force + noise_scale * batch.dxi_v[i];
      if (!std::isfinite(x_new) || !std::isfinite(v_new)) {
        throw divergence_error("unscaled", i, k);
      }
      state.x[i] = x_new;
      state.v[i] = v_new;
    }
    state.mu_hat = deterministic_mean(state.x);
    record(k + 1);
  }
  return bundle;
}

PathBundle time_change(const PathBundle& bundle, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw parameter_error("time_change: gamma must be finite and > 0");
  }
  if (gamma == 1.0) return bundle;

  PathBundle out = bundle;
  out.system = SystemKind::kSecondOrder;
  // Friction rate scales by gamma under x'(t') = x(gamma t'), v'(t') = gamma v(gamma t'):
  // the unscaled system at rate gamma lands on the beta = gamma^2 system.
  out.config.beta = bundle.config.beta * gamma;
  out.config.horizon = bundle.config.horizon / gamma;
  const double h = bundle.n_steps > 0 ? (bundle.grid[1] - bundle.grid[0]) / gamma : 0.0;
  for (int k = 0; k <= bundle.n_steps; ++k) out.grid[k] = static_cast<double>(k) * h;
  for (double& v : out.v) v *= gamma;
  return out;
}

MatchReport distribution_match(const PathBundle& a, const PathBundle& b,
                               std::span<const double> checkpoints, double alpha) {
  if (checkpoints.empty()) throw parameter_error("distribution_match: no checkpoints");

  MatchReport report;
  report.alpha = alpha;
  report.passes = true;
  for (double t : checkpoints) {
    const std::vector<double> xa = column(a, checkpoint_index(a, t));
    const std::vector<double> xb = column(b, checkpoint_index(b, t));

    CheckpointReport cp;
    cp.t = t;
    cp.ks_distance = two_sample_ks_distance(xa, xb);
    cp.ks_critical = ks_critical_value(xa.size(), xb.size(), alpha);
    bool ok = cp.ks_distance < cp.ks_critical;
    std::vector<double> pa(xa.size()), pb(xb.size());
    std::copy(xa.begin(), xa.end(), pa.begin());
    std::copy(xb.begin(), xb.end(), pb.begin());
    for (int k = 0; k < 4; ++k) {
      if (k > 0) {
        for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= xa[i];
        for (std::size_t i = 0; i < pb.size(); ++i) pb[i] *= xb[i];
      }
      const MeanVar ma = mean_and_variance(pa);
      const MeanVar mb = mean_and_variance(pb);
      cp.moment_diff[k] = std::abs(ma.mean - mb.mean);
      cp.moment_se[k] = std::sqrt(ma.var / static_cast<double>(pa.size()) +
                                  mb.var / static_cast<double>(pb.size()));
      ok = ok && cp.moment_diff[k] <= 4.0 * cp.moment_se[k];
    }
    cp.passes = ok;
    report.passes = report.passes && ok;
    report.checkpoints.push_back(cp);
  }
  return report;
}

}  // namespace sklab
