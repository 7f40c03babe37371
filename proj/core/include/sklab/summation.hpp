#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace sklab {

/// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

/// Width of the fixed reduction blocks. Reductions are computed per block and
/// combined in block order, so the result is independent of how blocks are
/// scheduled across workers.
inline constexpr std::size_t kReductionBlock = 1024;

std::size_t reduction_block_count(std::size_t n);

/// Compensated sum of one block [begin, end).
double block_partial_sum(std::span<const double> xs, std::size_t begin, std::size_t end);

/// Fixed-block compensated sum / mean of the whole span.
double deterministic_sum(std::span<const double> xs);
double deterministic_mean(std::span<const double> xs);

/// Combine per-block partial sums (block order) and divide by n.
double combine_block_means(std::span<const double> partials, std::size_t n);

}  // namespace sklab
