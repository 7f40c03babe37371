#pragma once

#include <string>
#include <vector>

#include "sklab/coupling.hpp"

namespace sklab {

/// Every constant of the strong-convergence estimate, kept in log space so
/// the astronomically large combinations (kappa T of order 1 already gives
/// e^40-sized factors) evaluate without overflow. Two variants are carried:
/// the constants exactly as printed in the source estimate (H and the
/// remainder bound each carry their own e^{theta T^2} factor, and the final
/// Gronwall factor is e^{D T^2}), and the sharper single-factor variant with
/// e^{D T} from Gronwall applied literally.
struct BoundLedger {
  double m_bound = 0.0;  // M, bound on E[x0^2 + v0^2]
  double kappa = 0.0;    // Lipschitz constant of K
  double horizon = 0.0;  // T

  double theta = 0.0;   // 20 kappa^2
  double d_rate = 0.0;  // D = 10 kappa^2 T
  double h0 = 0.0;      // H0 = 5M + 5 + 45T + 40T^2

  double log_h = 0.0;               // H = H0 e^{theta T^2}
  double log_lambda_printed = 0.0;  // Lambda = 5 (kappa^2 T H e^{theta T^2} + 3/2)
  double log_lambda_sharp = 0.0;    // 5 (kappa^2 T H + 3/2)
  bool overflowed = false;          // plain-double accessors saturate to inf

  double h_sup() const;           // H, may be inf
  double lambda_printed() const;  // Lambda, may be inf
  double lambda_sharp() const;

  /// Strong-error bound (1/beta) Lambda e^{D T^2} and its log.
  double strong_error_bound(double beta) const;
  double log_strong_error_bound(double beta) const;
  /// Sharper variant (1/beta) Lambda_sharp e^{D T}.
  double strong_error_bound_sharp(double beta) const;

  /// Bound on the drift-convolution remainder: (kappa^2/beta) T H e^{theta T^2}.
  double drift_convolution_bound(double beta) const;
  double drift_convolution_bound_sharp(double beta) const;  // (kappa^2/beta) T H
};

/// Computes all constants. m_bound >= 0, kappa >= 0, horizon > 0. Saturation
/// to infinity is reported through BoundLedger::overflowed, never thrown.
BoundLedger compute_ledger(double m_bound, double kappa, double horizon);

struct MomentReport {
  double value = 0.0;
  double bound = 0.0;
  /// The 1/beta^k reference bound assumes a unit velocity moment; false when
  /// E|v0|^k > 1 and the bound as stated does not apply.
  bool bound_applicable = true;
};

/// k-th absolute moment of the inertial transient r(t) = v0 (1 - e^{-beta t})/beta:
/// E|r(t)|^k = E|v0|^k (1 - e^{-beta t})^k / beta^k, reference bound 1/beta^k.
MomentReport inertial_transient_moment(double beta, double t, int k, double v0_abs_moment_k);

/// Second moment of the noise convolution c(t) = -e^{-beta t} int_0^t e^{beta s} dB_s:
/// E[c(t)^2] = (1 - e^{-2 beta t}) / (2 beta), reference bound 1/(2 beta).
MomentReport noise_convolution_second_moment(double beta, double t);

/// Per-particle sup over the grid of the squared drift-convolution remainder
///   I(t) = -e^{-beta t} int_0^t e^{beta s} K(x_s - mean_s) ds,
/// accumulated by trapezoidal quadrature in the shifted form
///   I_{k+1} = e^{-beta h} I_k - (h/2) (e^{-beta h} K_k + K_{k+1}),
/// which never evaluates a growing exponential.
std::vector<double> drift_convolution_sup_sq(const PathBundle& x_bundle,
                                             const DriftKernel& kernel);

/// One row of the validation report (CSV schema: name,lhs,rhs,margin,passes,paper_eq).
struct ValidationRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool passes = false;
  std::string formula;  // human-readable statement of the bound being checked
};

/// Uniform-in-beta bound on E[sup_t x^2]: empirical sup moment vs H(T).
/// Requires a second-order bundle with beta > 1.
ValidationRecord validate_sup_moment(const PathBundle& bundle, const BoundLedger& ledger);

/// Monte-Carlo estimate of E[sup_t I(t)^2] vs (kappa^2/beta) T H e^{theta T^2};
/// passes when the estimate is at or below the bound plus three 95% halfwidths.
ValidationRecord validate_drift_convolution(const CoupledRun& run, const BoundLedger& ledger);

}  // namespace sklab
