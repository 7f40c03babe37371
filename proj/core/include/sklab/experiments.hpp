#pragma once

#include <span>
#include <string>
#include <vector>

#include "sklab/bounds.hpp"

namespace sklab {

enum class StepPolicy {
  kFixed,          // same n_steps for every beta (the exponential step needs no refinement)
  kScaleWithBeta,  // n_steps(beta) = ceil(base * sqrt(beta / beta_min)), bias cross-check
};

struct StudyConfig {
  std::vector<double> beta_grid;  // strictly increasing, length >= 3
  SimConfig base;                 // beta is overwritten per run
  StepPolicy policy = StepPolicy::kFixed;
  std::string output_dir;
};

struct BetaPoint {
  double beta = 0.0;
  double error_mean = 0.0;
  double ci_halfwidth = 0.0;
  double bound_printed = 0.0;
  double bound_sharp = 0.0;
  int n_steps = 0;
  std::vector<double> sup_sq_errors;  // per particle, for the errors CSV
};

struct RateFit {
  double slope = 0.0;  // d log(error) / d log(beta), unweighted least squares
  double intercept = 0.0;
  double r_squared = 0.0;
  double weighted_slope = 0.0;  // CI-weighted fit, robustness check
  std::vector<BetaPoint> per_beta;
};

/// Acceptance band for the fitted decay rate. The strong error behaves like
/// log(beta T)/beta at desk scale, so the band brackets -1 asymmetrically.
inline constexpr double kSlopeBandLow = -1.2;
inline constexpr double kSlopeBandHigh = -0.75;

/// One coupled run per beta, error estimates, bounds and the log-log fit.
/// Aborts with the offending beta if any run diverges.
RateFit run_convergence_study(const StudyConfig& study, int workers = 1);

/// Report verdicts.
bool slope_in_band(const RateFit& fit);
bool bound_dominance(const RateFit& fit);  // error_mean <= bound_printed everywhere
bool errors_monotone_decreasing(const RateFit& fit);  // up to CI overlap

/// Writes study.csv, per-beta errors CSVs, and summary.txt (rate section,
/// band/dominance/monotonicity verdicts, ledger constants, one line per
/// validation record). Returns the file names written, relative to
/// output_dir. Bodies are deterministic in the study inputs.
std::vector<std::string> emit_report(const RateFit& fit, const BoundLedger& ledger,
                                     std::span<const ValidationRecord> validations,
                                     const std::string& output_dir);

}  // namespace sklab
