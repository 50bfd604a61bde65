#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mgap/ar1.hpp"

namespace mgap {

// Coupled draws of two processes at one index n; x[i] and y[i] must come
// from the same replication.
struct CoupledSample {
  long n = 0;
  std::vector<double> x;
  std::vector<double> y;
};

CoupledSample as_coupled(const ProcessPairSample& sample);

struct GapRow {
  long n = 0;
  std::size_t replications = 0;
  double gap_lr = 0.0;          // mean |x - y|^r
  double gap_abs_moment = 0.0;  // |mean |x|^r - mean |y|^r|
  double gap_norm = 0.0;        // |(mean |x|^r)^{1/r} - (mean |y|^r)^{1/r}|
  std::optional<double> gap_mean;  // |mean x - mean y|, r >= 1 only
  double hw_lr = 0.0;           // 3-sigma half-widths of the underlying means
  double hw_abs_x = 0.0;
  double hw_abs_y = 0.0;
  double hw_mean_x = 0.0;
  double hw_mean_y = 0.0;
};

struct MomentGapReport {
  double r = 1.0;
  std::vector<GapRow> rows;
};

// One row of gap estimates from a coupled pair of arrays. Uses pairwise
// summation throughout, so the result is a pure function of (x, y, r).
GapRow gap_row(long n, std::span<const double> x, std::span<const double> y,
               double r);

MomentGapReport gap_report(const std::vector<CoupledSample>& pairs, double r);
MomentGapReport gap_report(const std::vector<ProcessPairSample>& pairs, double r);

// Elementwise check of ||x|^r - |y|^r| <= |x - y|^r for r in (0,1].
std::size_t verify_pointwise_inequalities(std::span<const double> x,
                                          std::span<const double> y, double r);

// Elementwise check of |x - y|^r <= 2^r (|x|^r + |y|^r).
std::size_t verify_cr_inequality(std::span<const double> x,
                                 std::span<const double> y, double r);

struct MinkowskiCheck {
  double lhs = 0.0;  // |empirical r-norm of x - empirical r-norm of y|
  double rhs = 0.0;  // empirical r-norm of x - y
  bool holds = false;
};

MinkowskiCheck verify_minkowski_gap(std::span<const double> x,
                                    std::span<const double> y, double r);

}  // namespace mgap
