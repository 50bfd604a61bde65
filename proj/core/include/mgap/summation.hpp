#pragma once

#include <cstddef>
#include <span>

namespace mgap {

// Pairwise (cascade) summation. The evaluation tree depends only on the
// element order and count, so results are bit-identical across runs and
// worker counts, and rounding error grows like log(n) instead of n.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

struct MeanEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // three standard errors
  std::size_t count = 0;
};

// Sample mean with a 3-sigma Monte Carlo half-width.
MeanEstimate mean_with_half_width(std::span<const double> values);

}  // namespace mgap
