#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sklab {

/// Monte-Carlo estimate of a mean with its standard error.
struct ErrorEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
  double confidence_halfwidth_95 = 0.0;  // 1.96 * std_error
};

/// Sample mean, standard error and 95% halfwidth. Requires n >= 2.
ErrorEstimate estimate_error(std::span<const double> samples);

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased sample variance
};

MeanVar mean_and_variance(std::span<const double> xs);

/// Two-sample Kolmogorov-Smirnov distance sup_t |F_a(t) - F_b(t)|.
double two_sample_ks_distance(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(alpha) * sqrt((na+nb)/(na*nb)),
/// c(alpha) = sqrt(-log(alpha/2)/2).
double ks_critical_value(std::size_t na, std::size_t nb, double alpha);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);
LineFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weight);

}  // namespace sklab
