#include "sklab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sklab/errors.hpp"
#include "sklab/summation.hpp"

namespace sklab {

MeanVar mean_and_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {};
  const double mean = deterministic_mean(xs);
  if (n == 1) return {mean, 0.0};
  CompensatedSum sq;
  for (double x : xs) {
    const double d = x - mean;
    sq.add(d * d);
  }
  return {mean, sq.value() / static_cast<double>(n - 1)};
}

ErrorEstimate estimate_error(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw parameter_error("estimate_error: need at least 2 samples, got " +
                          std::to_string(samples.size()));
  }
  const MeanVar mv = mean_and_variance(samples);
  ErrorEstimate est;
  est.n = static_cast<long>(samples.size());
  est.mean = mv.mean;
  est.std_error = std::sqrt(mv.var / static_cast<double>(samples.size()));
  est.confidence_halfwidth_95 = 1.96 * est.std_error;
  return est;
}

double two_sample_ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw parameter_error("ks distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t na, std::size_t nb, double alpha) {
  if (na == 0 || nb == 0) throw parameter_error("ks critical value: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw parameter_error("ks critical value: alpha in (0,1)");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double n1 = static_cast<double>(na);
  const double n2 = static_cast<double>(nb);
  return c * std::sqrt((n1 + n2) / (n1 * n2));
}

LineFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weight) {
  if (x.size() != y.size() || x.size() != weight.size() || x.size() < 2) {
    throw parameter_error("least squares: need matching x/y/weight with >= 2 points");
  }
  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += weight[i];
    swx += weight[i] * x[i];
    swy += weight[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xbar;
    const double dy = y[i] - ybar;
    sxx += weight[i] * dx * dx;
    sxy += weight[i] * dx * dy;
    syy += weight[i] * dy * dy;
  }
  if (sxx == 0.0) throw parameter_error("least squares: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size(), 1.0);
  return weighted_least_squares(x, y, w);
}

}  // namespace sklab
