#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sklab {

/// Mean-field drift kernel K with its declared Lipschitz constant kappa.
/// Contract: |K(a) - K(b)| <= kappa |a - b| and K(0) = 0, so |K(z)| <= kappa|z|.
/// kappa is declared, not inferred; check_lipschitz guards it.
/// Immutable after construction; safe to evaluate from any number of threads.
class DriftKernel {
 public:
  DriftKernel(std::string name, double kappa, std::function<double(double)> eval);

  /// Evaluates K(z). Throws domain_error for non-finite z.
  double operator()(double z) const;

  double kappa() const { return kappa_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  double kappa_;
  std::function<double(double)> eval_;
};

DriftKernel zero_kernel();
DriftKernel linear_kernel(double lambda);              // K(z) = -lambda z, kappa = lambda
DriftKernel tanh_kernel(double a, double b);           // K(z) = a tanh(b z), kappa = a b
DriftKernel clamp_kernel(double slope, double limit);  // K(z) = -slope clamp(z, +-limit)

/// Builds a kernel from a config-style (name, params) pair. An explicit
/// declared_kappa overrides the builtin constant (used to exercise the guard).
DriftKernel make_kernel(const std::string& name, const std::vector<double>& params,
                        std::optional<double> declared_kappa = std::nullopt);

const std::vector<std::string>& builtin_kernel_names();

struct LipschitzReport {
  double max_observed_ratio = 0.0;
  bool passes = false;
};

/// Difference-quotient sweep over consecutive points of a uniform grid on
/// [lo, hi]; passes when the largest observed ratio stays at or below the
/// declared kappa (small relative slack for roundoff).
LipschitzReport check_lipschitz(const DriftKernel& kernel, double lo, double hi, int n_samples);

}  // namespace sklab
