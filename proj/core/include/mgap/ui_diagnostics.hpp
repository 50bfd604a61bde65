#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mgap {

// Estimates of E[|X|^r 1(|X|^r > A)] over a grid of thresholds A, one row
// per sequence index. Computed from sorted order statistics, so each row is
// non-increasing in A exactly, not merely in expectation.
struct TailFunctionalCurve {
  double r = 1.0;
  std::vector<double> a_grid;
  std::vector<std::vector<double>> values;       // [sample index][A index]
  std::vector<std::vector<double>> half_widths;  // 3-sigma, same shape
};

TailFunctionalCurve tail_functional(
    const std::vector<std::vector<double>>& samples, double r,
    std::vector<double> a_grid);

struct UiMomentReport {
  double delta = 0.0;
  double cap = 0.0;
  std::vector<double> estimates;    // per sample: mean |x|^{1+delta}
  std::vector<double> half_widths;
  double max_estimate = 0.0;
  bool pass = false;  // max (estimate + half_width) <= cap
};

UiMomentReport check_ui_sufficient(
    const std::vector<std::vector<double>>& samples, double delta, double cap);

// H(t) = integral of the empirical survivor function from t upward, i.e.
// the sample mean of (x - t)^+. Piecewise linear, convex, non-increasing.
struct SurvivorCurve {
  std::vector<double> t_grid;
  std::vector<double> h_values;
  std::vector<double> half_widths;
};

SurvivorCurve integrated_survivor(std::span<const double> sample,
                                  std::vector<double> t_grid);

enum class IcVerdict { LeqIc, GeqIc, Crossing, Inconclusive };

std::string to_string(IcVerdict v);

// Increasing-convex-order comparison of two nonnegative samples via their
// H curves. A direction counts only when its violation exceeds the combined
// Monte Carlo slack; equality of curves reports LeqIc with zero margins.
struct IcComparison {
  IcVerdict verdict = IcVerdict::Inconclusive;
  std::vector<double> t_grid;
  std::vector<double> h1;
  std::vector<double> h2;
  std::vector<double> margin;  // h1 - h2
  std::vector<double> slack;   // combined half-widths
};

IcComparison ic_compare(std::span<const double> sample1,
                        std::span<const double> sample2,
                        std::vector<double> t_grid);

// Geometric grids from a small sample quantile to past the sample maximum.
std::vector<double> default_t_grid(std::span<const double> sample1,
                                   std::span<const double> sample2,
                                   std::size_t points = 40);
std::vector<double> default_a_grid(
    const std::vector<std::vector<double>>& samples, double r,
    std::size_t points = 32);

}  // namespace mgap
