#pragma once

#include <span>

namespace mgap {

// Two-sample Kolmogorov-Smirnov statistic, max |F1 - F2| over the merged
// sample with ties consumed before each comparison.
double two_sample_ks_statistic(std::span<const double> a,
                               std::span<const double> b);

// Asymptotic two-sample critical value at the given level:
// sqrt(-ln(alpha/2)/2) * sqrt((n1+n2)/(n1*n2)).
double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha);

}  // namespace mgap
