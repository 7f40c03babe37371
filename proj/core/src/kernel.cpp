#include "sklab/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "sklab/errors.hpp"

namespace sklab {

DriftKernel::DriftKernel(std::string name, double kappa, std::function<double(double)> eval)
    : name_(std::move(name)), kappa_(kappa), eval_(std::move(eval)) {
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) {
    throw parameter_error("kernel '" + name_ + "': kappa must be finite and >= 0");
  }
  if (!eval_) throw parameter_error("kernel '" + name_ + "': missing evaluation function");
}

double DriftKernel::operator()(double z) const {
  if (!std::isfinite(z)) {
    throw domain_error("kernel '" + name_ + "': non-finite argument");
  }
  return eval_(z);
}

DriftKernel zero_kernel() {
  return DriftKernel("zero", 0.0, [](double) { return 0.0; });
}

DriftKernel linear_kernel(double lambda) {
  if (!(lambda >= 0.0)) throw parameter_error("linear kernel: lambda must be >= 0");
  return DriftKernel("linear", lambda, [lambda](double z) { return -lambda * z; });
}

DriftKernel tanh_kernel(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw parameter_error("tanh kernel: a, b must be >= 0");
  return DriftKernel("tanh", a * b, [a, b](double z) { return a * std::tanh(b * z); });
}

DriftKernel clamp_kernel(double slope, double limit) {
  if (!(slope >= 0.0) || !(limit > 0.0)) {
    throw parameter_error("clamp kernel: slope >= 0 and limit > 0 required");
  }
  return DriftKernel("clamp", slope, [slope, limit](double z) {
    return -slope * std::clamp(z, -limit, limit);
  });
}

const std::vector<std::string>& builtin_kernel_names() {
  static const std::vector<std::string> names = {"zero", "linear", "tanh", "clamp"};
  return names;
}

DriftKernel make_kernel(const std::string& name, const std::vector<double>& params,
                        std::optional<double> declared_kappa) {
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw parameter_error("kernel '" + name + "': expected " + std::to_string(n) +
                            " parameter(s), got " + std::to_string(params.size()));
    }
  };
  auto with_kappa = [&](DriftKernel k) {
    if (!declared_kappa) return k;
    return DriftKernel(k.name(), *declared_kappa, [k](double z) { return k(z); });
  };
  if (name == "zero") {
    expect(0);
    return with_kappa(zero_kernel());
  }
  if (name == "linear") {
    expect(1);
    return with_kappa(linear_kernel(params[0]));
  }
  if (name == "tanh") {
    expect(2);
    return with_kappa(tanh_kernel(params[0], params[1]));
  }
  if (name == "clamp") {
    expect(2);
    return with_kappa(clamp_kernel(params[0], params[1]));
  }
  throw parameter_error("unknown kernel '" + name + "'");
}

LipschitzReport check_lipschitz(const DriftKernel& kernel, double lo, double hi, int n_samples) {
  if (!(lo < hi)) throw parameter_error("check_lipschitz: lo < hi required");
  if (n_samples < 2) throw parameter_error("check_lipschitz: n_samples >= 2 required");

  const double step = (hi - lo) / static_cast<double>(n_samples - 1);
  double max_ratio = 0.0;
  double prev_x = lo;
  double prev_k = kernel(lo);
  for (int i = 1; i < n_samples; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double k = kernel(x);
    const double dx = x - prev_x;
    if (dx > 0.0) max_ratio = std::max(max_ratio, std::abs(k - prev_k) / dx);
    prev_x = x;
    prev_k = k;
  }
  LipschitzReport report;
  report.max_observed_ratio = max_ratio;
  // Relative slack for the difference-quotient roundoff; an exactly linear
  // kernel observes its own kappa.
  report.passes = max_ratio <= kernel.kappa() * (1.0 + 1e-9) + 1e-15;
  return report;
}

}  // namespace sklab
