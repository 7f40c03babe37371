#include "sklab/coupling.hpp"

#include <cmath>

#include "sklab/errors.hpp"

namespace sklab {
namespace {

void require_common_grid(const PathBundle& a, const PathBundle& b) {
  if (a.n_particles != b.n_particles || a.n_steps != b.n_steps || a.grid != b.grid) {
    throw contract_error("sup_sq_error: bundles do not share a common grid");
  }
}

}  // namespace

CoupledRun coupled_simulate(const SimConfig& config, int workers) {
  config.validate(SystemKind::kSecondOrder);

  CoupledRun run;
  run.config = config;
  // Both systems draw the identical (particle, step) triples: x consumes the
  // correlated components, y the Brownian one; y0 = x0 comes from the shared
  // initial-law counters.
  run.x_bundle = simulate(config, SystemKind::kSecondOrder, workers);
  run.y_bundle = simulate(config, SystemKind::kLimit, workers);
  run.sup_sq_errors = sup_sq_error(run.x_bundle, run.y_bundle);
  return run;
}

std::vector<double> sup_sq_error(const PathBundle& x_bundle, const PathBundle& y_bundle) {
  require_common_grid(x_bundle, y_bundle);
  const int n = x_bundle.n_particles;
  const int m = x_bundle.n_steps;
  std::vector<double> sup(n, 0.0);
  for (int p = 0; p < n; ++p) {
    double best = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double d = x_bundle.x_at(p, k) - y_bundle.x_at(p, k);
      best = std::max(best, d * d);
    }
    sup[p] = best;
  }
  return sup;
}

std::vector<double> sup_sq_error(const CoupledRun& run) {
  return sup_sq_error(run.x_bundle, run.y_bundle);
}

}  // namespace sklab
