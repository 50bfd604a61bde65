#include "mgap/summation.hpp"

#include <cmath>
#include <vector>

#include "mgap/errors.hpp"

namespace mgap {
namespace {

constexpr std::size_t kBaseBlock = 64;

double pairwise_sum_rec(const double* v, std::size_t n) {
  if (n <= kBaseBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_rec(v, half) + pairwise_sum_rec(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_rec(values.data(), values.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) throw config_error("mean of empty sample");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

MeanEstimate mean_with_half_width(std::span<const double> values) {
  if (values.empty()) throw config_error("mean of empty sample");
  const std::size_t n = values.size();
  const double m = pairwise_sum(values) / static_cast<double>(n);
  if (n == 1) return {m, 0.0, 1};
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - m;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  const double se = std::sqrt(var / static_cast<double>(n));
  return {m, 3.0 * se, n};
}

}  // namespace mgap
