#include "sklab/bounds.hpp"

#include <cmath>
#include <limits>

#include "sklab/errors.hpp"

namespace sklab {
namespace {

constexpr double kLogDblMax = 709.78;  // log(DBL_MAX), with margin

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double exp_or_inf(double log_value) {
  if (log_value > kLogDblMax) return std::numeric_limits<double>::infinity();
  return std::exp(log_value);
}

}  // namespace

double BoundLedger::h_sup() const { return exp_or_inf(log_h); }
double BoundLedger::lambda_printed() const { return exp_or_inf(log_lambda_printed); }
double BoundLedger::lambda_sharp() const { return exp_or_inf(log_lambda_sharp); }

double BoundLedger::log_strong_error_bound(double beta) const {
  if (!(beta > 0.0)) throw parameter_error("strong_error_bound: beta must be > 0");
  return log_lambda_printed + d_rate * horizon * horizon - std::log(beta);
}

double BoundLedger::strong_error_bound(double beta) const {
  return exp_or_inf(log_strong_error_bound(beta));
}

double BoundLedger::strong_error_bound_sharp(double beta) const {
  if (!(beta > 0.0)) throw parameter_error("strong_error_bound_sharp: beta must be > 0");
  return exp_or_inf(log_lambda_sharp + d_rate * horizon - std::log(beta));
}

double BoundLedger::drift_convolution_bound(double beta) const {
  if (!(beta > 0.0)) throw parameter_error("drift_convolution_bound: beta must be > 0");
  if (kappa == 0.0) return 0.0;
  return exp_or_inf(std::log(kappa * kappa * horizon / beta) + log_h + theta * horizon * horizon);
}

double BoundLedger::drift_convolution_bound_sharp(double beta) const {
  if (!(beta > 0.0)) throw parameter_error("drift_convolution_bound_sharp: beta must be > 0");
  if (kappa == 0.0) return 0.0;
  return exp_or_inf(std::log(kappa * kappa * horizon / beta) + log_h);
}

BoundLedger compute_ledger(double m_bound, double kappa, double horizon) {
  if (!(m_bound >= 0.0)) throw parameter_error("compute_ledger: M must be >= 0");
  if (!(kappa >= 0.0)) throw parameter_error("compute_ledger: kappa must be >= 0");
  if (!(horizon > 0.0)) throw parameter_error("compute_ledger: T must be > 0");

  BoundLedger ledger;
  ledger.m_bound = m_bound;
  ledger.kappa = kappa;
  ledger.horizon = horizon;
  const double t = horizon;
  ledger.theta = 20.0 * kappa * kappa;
  ledger.d_rate = 10.0 * kappa * kappa * t;
  ledger.h0 = 5.0 * m_bound + 5.0 + 45.0 * t + 40.0 * t * t;
  ledger.log_h = std::log(ledger.h0) + ledger.theta * t * t;

  const double log_three_halves = std::log(1.5);
  if (kappa == 0.0) {
    // Lambda = 5 * 3/2 regardless of H.
    ledger.log_lambda_printed = std::log(7.5);
    ledger.log_lambda_sharp = std::log(7.5);
  } else {
    const double log_kt = std::log(kappa * kappa * t);
    ledger.log_lambda_printed =
        std::log(5.0) + log_add_exp(log_kt + ledger.log_h + ledger.theta * t * t, log_three_halves);
    ledger.log_lambda_sharp =
        std::log(5.0) + log_add_exp(log_kt + ledger.log_h, log_three_halves);
  }
  ledger.overflowed = ledger.log_h > kLogDblMax ||
                      ledger.log_lambda_printed + ledger.d_rate * t * t > kLogDblMax;
  return ledger;
}

MomentReport inertial_transient_moment(double beta, double t, int k, double v0_abs_moment_k) {
  if (!(beta > 0.0)) throw parameter_error("inertial_transient_moment: beta must be > 0");
  if (!(t >= 0.0)) throw parameter_error("inertial_transient_moment: t must be >= 0");
  if (k < 1) throw parameter_error("inertial_transient_moment: k must be >= 1");
  if (!(v0_abs_moment_k >= 0.0)) {
    throw parameter_error("inertial_transient_moment: E|v0|^k must be >= 0");
  }
  MomentReport report;
  const double ratio = one_minus_exp_neg(beta * t) / beta;
  report.value = v0_abs_moment_k * std::pow(ratio, k);
  report.bound = std::pow(beta, -k);
  report.bound_applicable = v0_abs_moment_k <= 1.0;
  return report;
}

MomentReport noise_convolution_second_moment(double beta, double t) {
  if (!(beta > 0.0)) throw parameter_error("noise_convolution_second_moment: beta must be > 0");
  if (!(t >= 0.0)) throw parameter_error("noise_convolution_second_moment: t must be >= 0");
  MomentReport report;
  report.value = one_minus_exp_neg(2.0 * beta * t) / (2.0 * beta);
  report.bound = 1.0 / (2.0 * beta);
  report.bound_applicable = true;
  return report;
}

std::vector<double> drift_convolution_sup_sq(const PathBundle& x_bundle,
                                             const DriftKernel& kernel) {
  if (x_bundle.system == SystemKind::kLimit) {
    throw contract_error("drift_convolution_sup_sq: needs a second-order bundle");
  }
  const double beta = x_bundle.config.beta;
  const double h = x_bundle.n_steps > 0 ? x_bundle.config.step_size() : 0.0;
  const double decay = std::exp(-beta * h);
  const int n = x_bundle.n_particles;
  const int m = x_bundle.n_steps;

  std::vector<double> sup(n, 0.0);
  for (int p = 0; p < n; ++p) {
    double conv = 0.0;
    double best = 0.0;
    double k_prev = kernel(x_bundle.x_at(p, 0) - x_bundle.mean_x[0]);
    for (int k = 0; k < m; ++k) {
      const double k_next = kernel(x_bundle.x_at(p, k + 1) - x_bundle.mean_x[k + 1]);
      conv = decay * conv - 0.5 * h * (decay * k_prev + k_next);
      best = std::max(best, conv * conv);
      k_prev = k_next;
    }
    sup[p] = best;
  }
  return sup;
}

ValidationRecord validate_sup_moment(const PathBundle& bundle, const BoundLedger& ledger) {
  if (bundle.system == SystemKind::kLimit) {
    throw contract_error("validate_sup_moment: needs a second-order bundle");
  }
  if (!(bundle.config.beta > 1.0)) {
    throw parameter_error("validate_sup_moment: the uniform bound applies for beta > 1");
  }
  std::vector<double> sup(bundle.n_particles, 0.0);
  for (int p = 0; p < bundle.n_particles; ++p) {
    double best = 0.0;
    for (int k = 0; k <= bundle.n_steps; ++k) {
      const double x = bundle.x_at(p, k);
      best = std::max(best, x * x);
    }
    sup[p] = best;
  }
  const ErrorEstimate est = estimate_error(sup);

  ValidationRecord record;
  record.name = "sup-moment-uniform";
  record.lhs = est.mean;
  record.rhs = ledger.h_sup();
  record.margin = record.rhs - record.lhs;
  record.passes = record.lhs <= record.rhs;
  record.formula = "E[sup|x|^2] <= H0*exp(theta*T^2)";
  return record;
}

ValidationRecord validate_drift_convolution(const CoupledRun& run, const BoundLedger& ledger) {
  const std::vector<double> sup = drift_convolution_sup_sq(run.x_bundle, run.config.kernel);
  const ErrorEstimate est = estimate_error(sup);
  const double bound = ledger.drift_convolution_bound(run.config.beta);

  ValidationRecord record;
  record.name = "drift-convolution-sup";
  record.lhs = est.mean;
  record.rhs = bound;
  record.margin = record.rhs - record.lhs;
  record.passes = est.mean <= bound + 3.0 * est.confidence_halfwidth_95;
  record.formula = "E[sup|conv|^2] <= (kappa^2/beta)*T*H*exp(theta*T^2)";
  return record;
}

}  // namespace sklab
