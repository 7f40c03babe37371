#include "sklab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include <CLI11.hpp>

#include "sklab/csv.hpp"
#include "sklab/errors.hpp"
#include "sklab/experiments.hpp"
#include "sklab/manifest.hpp"
#include "sklab/parallel.hpp"
#include "sklab/scaling.hpp"
#include "sklab/summation.hpp"

namespace sklab::cli {
namespace {

namespace fs = std::filesystem;

struct OutputSink {
  std::string dir;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& body) {
    fs::create_directories(dir);
    write_text_file((fs::path(dir) / name).string(), body);
    files.push_back(name);
  }
};

void finish_manifest(const CliConfig& config, const char* command, int workers,
                     const std::string& started, OutputSink& sink) {
  RunManifest manifest;
  manifest.command = command;
  manifest.seed = config.seed;
  manifest.workers = workers;
  manifest.config_ini = render_config_ini(config);
  manifest.started_at = started;
  manifest.finished_at = utc_timestamp();
  manifest.outputs = sink.files;
  manifest.outputs.push_back("manifest.json");
  fs::create_directories(sink.dir);
  write_text_file((fs::path(sink.dir) / "manifest.json").string(), manifest_json(manifest));
}

// Monte-Carlo estimate of the second moment of the noise convolution
// c(t) = -e^{-beta t} ∫_0^t e^{beta s} dB_s on a fine grid, by the trapezoid
// Riemann sum of the defining integral (independent of the closed form).
double convolution_second_moment_mc(double beta, double t, int n_paths, std::uint64_t seed) {
  const double dt_target = std::min(0.05 / beta, t / 100.0);
  const int n_steps = static_cast<int>(std::ceil(t / dt_target));
  const double dt = t / n_steps;
  const double decay = std::exp(-beta * dt);
  const double weight = 0.5 * (1.0 + decay);

  CompensatedSum acc;
  for (int p = 0; p < n_paths; ++p) {
    const auto increments =
        brownian_increments(RngStream{seed, static_cast<std::uint32_t>(p), 0}, dt, n_steps);
    double conv = 0.0;
    for (int k = 0; k < n_steps; ++k) conv = decay * conv - weight * increments[k];
    acc.add(conv * conv);
  }
  return acc.value() / n_paths;
}

ValidationRecord lipschitz_record(const DriftKernel& kernel) {
  const LipschitzReport report = check_lipschitz(kernel, -10.0, 10.0, 10000);
  ValidationRecord record;
  record.name = "lipschitz-guard";
  record.lhs = report.max_observed_ratio;
  record.rhs = kernel.kappa();
  record.margin = record.rhs - record.lhs;
  record.passes = report.passes;
  record.formula = "|K(a)-K(b)| <= kappa*|a-b|";
  return record;
}

ValidationRecord transient_exactness_record(double beta, double horizon, int n_steps) {
  // Noiseless zero-kernel run: x(T) - x0 must equal the closed-form transient.
  SimConfig config;
  config.beta = beta;
  config.kernel = zero_kernel();
  config.horizon = horizon;
  config.n_steps = n_steps;
  config.n_particles = 1;
  config.init = InitialLaw{InitialLaw::Kind::kDeterministicPoint, 0.0, 1.0, 0.0, 0.0, 1.0};
  config.seed = 0;

  Ensemble state = make_initial_ensemble(config, SystemKind::kSecondOrder);
  StepNoiseBatch zero;
  zero.resize(1);
  for (int k = 0; k < n_steps; ++k) exact_ou_step(state, config, zero, k);

  ValidationRecord record;
  record.name = "inertial-transient-exactness";
  record.lhs = state.x[0];
  record.rhs = inertial_transient_moment(beta, horizon, 1, 1.0).value;
  record.margin = record.rhs - record.lhs;
  record.passes = std::abs(record.margin) <= 1e-12 * std::max(1.0, std::abs(record.rhs));
  record.formula = "E|r(t)|^k = E|v0|^k*(1-exp(-beta*t))^k/beta^k";
  return record;
}

ValidationRecord convolution_moment_record(double beta, double horizon, std::uint64_t seed) {
  const int n_paths = 20000;
  const double mc = convolution_second_moment_mc(beta, horizon, n_paths, seed);
  const double closed = noise_convolution_second_moment(beta, horizon).value;
  // Var(c^2) = 2 Var(c)^2 for the Gaussian convolution.
  const double se = closed * std::sqrt(2.0 / n_paths);

  ValidationRecord record;
  record.name = "noise-convolution-moment";
  record.lhs = mc;
  record.rhs = closed;
  record.margin = 4.0 * se - std::abs(mc - closed);
  record.passes = std::abs(mc - closed) <= 4.0 * se;
  record.formula = "E|c(t)|^2 = (1-exp(-2*beta*t))/(2*beta)";
  return record;
}

int scaled_step_count(double gamma, int n_steps) {
  const double exact = gamma * n_steps;
  const long rounded = std::lround(exact);
  if (std::abs(exact - static_cast<double>(rounded)) > 1e-9 || rounded < 1) {
    throw config_error("scaling.gamma",
                       "scaling.gamma * sim.n_steps must be a positive integer so the "
                       "transformed grid hits the checkpoints");
  }
  return static_cast<int>(rounded);
}

int dispatch(const std::string& command, const std::string& config_path, int workers_opt) {
  const int workers = resolve_worker_count(workers_opt);
  const CliConfig config = parse_config_file(config_path);
  if (command == "simulate") return cmd_simulate(config, workers);
  if (command == "converge") return cmd_converge(config, workers);
  if (command == "validate-bounds") return cmd_validate_bounds(config, workers);
  if (command == "scaling-check") return cmd_scaling_check(config, workers);
  throw parameter_error("unknown command " + command);
}

}  // namespace

int cmd_simulate(const CliConfig& config, int workers) {
  const std::string started = utc_timestamp();
  const SimConfig sim = build_sim_config(config);
  const SystemKind system =
      config.system == "limit" ? SystemKind::kLimit : SystemKind::kSecondOrder;
  const PathBundle bundle = simulate(sim, system, workers);

  OutputSink sink{config.output_dir, {}};
  sink.write("paths.csv", paths_csv(bundle));
  finish_manifest(config, "simulate", workers, started, sink);
  return kExitOk;
}

int cmd_converge(const CliConfig& config, int workers) {
  const std::string started = utc_timestamp();
  if (config.beta_grid.size() < 3) {
    throw config_error("sim.beta_grid",
                       "converge needs sim.beta_grid with at least 3 entries, got " +
                           std::to_string(config.beta_grid.size()));
  }
  StudyConfig study;
  study.beta_grid = config.beta_grid;
  study.base.beta = config.beta_grid.front();
  study.base.kernel = build_kernel(config.kernel);
  study.base.horizon = config.horizon;
  study.base.n_steps = config.n_steps;
  study.base.n_particles = config.n_particles;
  study.base.init = config.init;
  study.base.seed = config.seed;
  study.policy =
      config.n_steps_policy == "fixed" ? StepPolicy::kFixed : StepPolicy::kScaleWithBeta;
  study.output_dir = config.output_dir;

  const RateFit fit = run_convergence_study(study, workers);
  const BoundLedger ledger = compute_ledger(config.init.second_moment_bound,
                                            study.base.kernel.kappa(), config.horizon);
  OutputSink sink{config.output_dir, emit_report(fit, ledger, {}, config.output_dir)};
  finish_manifest(config, "converge", workers, started, sink);

  const bool ok = slope_in_band(fit) && bound_dominance(fit) && errors_monotone_decreasing(fit);
  return ok ? kExitOk : kExitValidationFailed;
}

int cmd_validate_bounds(const CliConfig& config, int workers) {
  const std::string started = utc_timestamp();
  const SimConfig sim = build_sim_config(config);
  const BoundLedger ledger =
      compute_ledger(sim.init.second_moment_bound, sim.kernel.kappa(), sim.horizon);

  std::vector<ValidationRecord> records;
  records.push_back(lipschitz_record(sim.kernel));
  records.push_back(transient_exactness_record(sim.beta, sim.horizon, sim.n_steps));
  records.push_back(convolution_moment_record(sim.beta, sim.horizon, sim.seed));
  if (sim.beta > 1.0) {
    const PathBundle bundle = simulate(sim, SystemKind::kSecondOrder, workers);
    records.push_back(validate_sup_moment(bundle, ledger));
  }
  const CoupledRun run = coupled_simulate(sim, workers);
  records.push_back(validate_drift_convolution(run, ledger));

  OutputSink sink{config.output_dir, {}};
  sink.write("validations.csv", validations_csv(records));
  finish_manifest(config, "validate-bounds", workers, started, sink);

  for (const ValidationRecord& record : records) {
    std::printf("%-32s %s\n", record.name.c_str(), record.passes ? "PASS" : "FAIL");
  }
  const bool ok =
      std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passes; });
  return ok ? kExitOk : kExitValidationFailed;
}

int cmd_scaling_check(const CliConfig& config, int workers) {
  const std::string started = utc_timestamp();
  if (!config.scaling) {
    throw config_error("scaling", "scaling-check needs a [scaling] section");
  }
  const ScalingConfig& sc = *config.scaling;
  const double gamma = sc.gamma;
  const double direct_beta = sc.beta.value_or(gamma * gamma);
  const DriftKernel kernel = build_kernel(config.kernel);

  SimConfig direct;
  direct.beta = direct_beta;
  direct.kernel = kernel;
  direct.horizon = config.horizon;
  direct.n_steps = config.n_steps;
  direct.n_particles = config.n_particles;
  direct.init = config.init;
  direct.seed = config.seed;
  const PathBundle direct_bundle = simulate(direct, SystemKind::kSecondOrder, workers);

  // The map sends v'(t') = gamma v(gamma t'): the unscaled run starts from
  // velocity v0/gamma so the transformed initial state matches the direct one.
  InitialLaw unscaled_init = config.init;
  unscaled_init.mean_v = config.init.mean_v / gamma;
  unscaled_init.var_v = config.init.var_v / (gamma * gamma);
  unscaled_init.second_moment_bound =
      std::max(config.init.second_moment_bound, unscaled_init.second_moment());

  const int n_unscaled = scaled_step_count(gamma, config.n_steps);
  const PathBundle unscaled = unscaled_simulate(gamma, kernel, config.horizon, n_unscaled,
                                                config.n_particles, unscaled_init,
                                                config.seed + 1, workers);
  const PathBundle transformed = time_change(unscaled, gamma);
  const MatchReport match = distribution_match(direct_bundle, transformed, sc.checkpoints);

  std::vector<ValidationRecord> records;
  for (const CheckpointReport& cp : match.checkpoints) {
    ValidationRecord ks;
    ks.name = "scaling-ks@t=" + format_double(cp.t);
    ks.lhs = cp.ks_distance;
    ks.rhs = cp.ks_critical;
    ks.margin = ks.rhs - ks.lhs;
    ks.passes = cp.ks_distance < cp.ks_critical;
    ks.formula = "sup|F_a-F_b| < c(alpha)*sqrt((n+m)/(n*m))";
    records.push_back(ks);
    for (int k = 0; k < 4; ++k) {
      ValidationRecord m;
      m.name = "scaling-moment" + std::to_string(k + 1) + "@t=" + format_double(cp.t);
      m.lhs = cp.moment_diff[k];
      m.rhs = 4.0 * cp.moment_se[k];
      m.margin = m.rhs - m.lhs;
      m.passes = cp.moment_diff[k] <= 4.0 * cp.moment_se[k];
      m.formula = "|m_k(a)-m_k(b)| <= 4*se";
      records.push_back(m);
    }
  }

  OutputSink sink{config.output_dir, {}};
  sink.write("validations.csv", validations_csv(records));
  finish_manifest(config, "scaling-check", workers, started, sink);

  for (const CheckpointReport& cp : match.checkpoints) {
    std::printf("t'=%-8s KS=%.5f crit=%.5f %s\n", format_double(cp.t).c_str(), cp.ks_distance,
                cp.ks_critical, cp.passes ? "PASS" : "FAIL");
  }
  return match.passes ? kExitOk : kExitValidationFailed;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage;
  argv_storage.push_back("sklab");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const std::string& s : argv_storage) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Desk-scale laboratory for the small-mass limit of mean-field "
               "stochastic oscillators"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 0;
  const char* descriptions[][2] = {
      {"simulate", "integrate one system and write the path CSV"},
      {"converge", "run the strong-convergence rate study over a beta grid"},
      {"validate-bounds", "check every tracked bound against simulation"},
      {"scaling-check", "compare the time-changed run against the direct system in law"},
  };
  for (const auto& d : descriptions) {
    CLI::App* sub = app.add_subcommand(d[0], d[1]);
    sub->add_option("config", config_path, "experiment config file (INI)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--workers", workers,
                    "worker threads; results are identical for any value "
                    "(default: SKLAB_THREADS or 1)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), config_path, workers);
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
}

}  // namespace sklab::cli
