#include "sklab/summation.hpp"

namespace sklab {

std::size_t reduction_block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

double block_partial_sum(std::span<const double> xs, std::size_t begin, std::size_t end) {
  CompensatedSum acc;
  for (std::size_t i = begin; i < end; ++i) acc.add(xs[i]);
  return acc.value();
}

double deterministic_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  CompensatedSum total;
  for (std::size_t begin = 0; begin < n; begin += kReductionBlock) {
    const std::size_t end = std::min(begin + kReductionBlock, n);
    total.add(block_partial_sum(xs, begin, end));
  }
  return total.value();
}

double deterministic_mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return deterministic_sum(xs) / static_cast<double>(xs.size());
}

double combine_block_means(std::span<const double> partials, std::size_t n) {
  CompensatedSum total;
  for (double p : partials) total.add(p);
  return n == 0 ? 0.0 : total.value() / static_cast<double>(n);
}

}  // namespace sklab
