#include "sklab/experiments.hpp"

#include <cmath>
#include <filesystem>

#include "sklab/csv.hpp"
#include "sklab/errors.hpp"
#include "sklab/manifest.hpp"
#include "sklab/stats.hpp"

namespace sklab {
namespace {

int steps_for_beta(const StudyConfig& study, double beta) {
  if (study.policy == StepPolicy::kFixed) return study.base.n_steps;
  const double scale = std::sqrt(beta / study.beta_grid.front());
  return static_cast<int>(std::ceil(study.base.n_steps * scale));
}

}  // namespace

bool slope_in_band(const RateFit& fit) {
  return fit.slope >= kSlopeBandLow && fit.slope <= kSlopeBandHigh;
}

bool bound_dominance(const RateFit& fit) {
  for (const BetaPoint& p : fit.per_beta) {
    if (!(p.error_mean <= p.bound_printed)) return false;
  }
  return true;
}

bool errors_monotone_decreasing(const RateFit& fit) {
  const auto& points = fit.per_beta;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const BetaPoint& a = points[i - 1];
    const BetaPoint& b = points[i];
    const bool decreasing = b.error_mean < a.error_mean;
    const bool overlap = b.error_mean - b.ci_halfwidth <= a.error_mean + a.ci_halfwidth &&
                         a.error_mean - a.ci_halfwidth <= b.error_mean + b.ci_halfwidth;
    if (!decreasing && !overlap) return false;
  }
  return true;
}

RateFit run_convergence_study(const StudyConfig& study, int workers) {
  const auto& grid = study.beta_grid;
  if (grid.size() < 3) {
    throw parameter_error("convergence study: beta_grid needs >= 3 points for the rate fit, got " +
                          std::to_string(grid.size()));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw parameter_error("convergence study: beta_grid must be strictly increasing");
    }
  }

  const BoundLedger ledger = compute_ledger(study.base.init.second_moment_bound,
                                            study.base.kernel.kappa(), study.base.horizon);
  RateFit fit;
  fit.per_beta.reserve(grid.size());
  for (double beta : grid) {
    SimConfig config = study.base;
    config.beta = beta;
    config.n_steps = steps_for_beta(study, beta);
    CoupledRun run;
    try {
      run = coupled_simulate(config, workers);
    } catch (const divergence_error& e) {
      throw divergence_error("study beta=" + std::to_string(beta) + " " + e.system(),
                             e.particle(), e.step());
    }
    const ErrorEstimate est = estimate_error(run.sup_sq_errors);

    BetaPoint point;
    point.beta = beta;
    point.error_mean = est.mean;
    point.ci_halfwidth = est.confidence_halfwidth_95;
    point.bound_printed = ledger.strong_error_bound(beta);
    point.bound_sharp = ledger.strong_error_bound_sharp(beta);
    point.n_steps = config.n_steps;
    point.sup_sq_errors = std::move(run.sup_sq_errors);
    fit.per_beta.push_back(std::move(point));
  }

  std::vector<double> lx, ly, lw;
  for (const BetaPoint& p : fit.per_beta) {
    if (!(p.error_mean > 0.0)) continue;  // only positive means enter the log-log fit
    lx.push_back(std::log(p.beta));
    ly.push_back(std::log(p.error_mean));
    const double rel_sd = p.ci_halfwidth / (1.96 * p.error_mean);
    lw.push_back(rel_sd > 0.0 ? 1.0 / (rel_sd * rel_sd) : 1.0);
  }
  const LineFit line = least_squares(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.weighted_slope = weighted_least_squares(lx, ly, lw).slope;
  return fit;
}

std::vector<std::string> emit_report(const RateFit& fit, const BoundLedger& ledger,
                                     std::span<const ValidationRecord> validations,
                                     const std::string& output_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  std::vector<std::string> files;

  const std::string study_name = "study.csv";
  write_text_file((fs::path(output_dir) / study_name).string(), study_csv(fit));
  files.push_back(study_name);

  for (const BetaPoint& p : fit.per_beta) {
    if (p.sup_sq_errors.empty()) continue;
    const std::string name = "errors_beta_" + format_double(p.beta) + ".csv";
    write_text_file((fs::path(output_dir) / name).string(), errors_csv(p.sup_sq_errors));
    files.push_back(name);
  }

  const bool band_ok = slope_in_band(fit);
  const bool dominance_ok = bound_dominance(fit);
  const bool monotone_ok = errors_monotone_decreasing(fit);

  std::string summary;
  summary += "rate fit: slope=" + format_double(fit.slope) +
             " intercept=" + format_double(fit.intercept) +
             " r_squared=" + format_double(fit.r_squared) +
             " weighted_slope=" + format_double(fit.weighted_slope) + "\n";
  summary += std::string("slope band [") + format_double(kSlopeBandLow) + ", " +
             format_double(kSlopeBandHigh) + "]: " + (band_ok ? "PASS" : "FAIL") + "\n";
  summary += std::string("bound dominance (error_mean <= bound_printed): ") +
             (dominance_ok ? "PASS" : "FAIL") + "\n";
  summary += std::string("monotone decreasing up to CI overlap: ") +
             (monotone_ok ? "PASS" : "FAIL") + "\n";
  summary += "ledger: M=" + format_double(ledger.m_bound) + " kappa=" + format_double(ledger.kappa) +
             " T=" + format_double(ledger.horizon) + " theta=" + format_double(ledger.theta) +
             " H0=" + format_double(ledger.h0) + " log_H=" + format_double(ledger.log_h) +
             " D=" + format_double(ledger.d_rate) +
             " log_Lambda=" + format_double(ledger.log_lambda_printed) +
             " log_Lambda_sharp=" + format_double(ledger.log_lambda_sharp) + "\n";
  for (const ValidationRecord& record : validations) {
    summary += "validation " + record.name + ": " + (record.passes ? "PASS" : "FAIL") +
               " lhs=" + format_double(record.lhs) + " rhs=" + format_double(record.rhs) +
               " margin=" + format_double(record.margin) + "\n";
  }
  const std::string summary_name = "summary.txt";
  write_text_file((fs::path(output_dir) / summary_name).string(), summary);
  files.push_back(summary_name);

  if (!validations.empty()) {
    const std::string val_name = "validations.csv";
    write_text_file((fs::path(output_dir) / val_name).string(), validations_csv(validations));
    files.push_back(val_name);
  }
  return files;
}

}  // namespace sklab
