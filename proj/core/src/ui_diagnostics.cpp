#include "mgap/ui_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mgap/errors.hpp"
#include "mgap/summation.hpp"

namespace mgap {
namespace {

void require_grid(std::span<const double> grid, bool positive,
                  const char* name) {
  if (grid.empty()) throw config_error(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (positive ? !(grid[i] > 0.0) : !(grid[i] >= 0.0))
      throw config_error(std::string(name) + " grid has out-of-range entry");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw config_error(std::string(name) + " grid must be increasing");
  }
}

// Survivor-curve machinery shared by integrated_survivor and ic_compare:
// ascending order statistics with suffix sums of x and x^2, giving exact
// evaluation of mean (x-t)^+ and its second moment at any t.
struct SortedSuffix {
  std::vector<double> sorted;
  std::vector<double> suffix;     // suffix[k] = sum_{i>=k} sorted[i]
  std::vector<double> suffix_sq;  // same for squares

  explicit SortedSuffix(std::span<const double> sample)
      : sorted(sample.begin(), sample.end()) {
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    suffix.assign(m + 1, 0.0);
    suffix_sq.assign(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;) {
      suffix[k] = suffix[k + 1] + sorted[k];
      suffix_sq[k] = suffix_sq[k + 1] + sorted[k] * sorted[k];
    }
  }

  // mean and 3-sigma half-width of (x - t)^+ over the sample
  std::pair<double, double> h_at(double t) const {
    const std::size_t m = sorted.size();
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    const double cnt = static_cast<double>(m - idx);
    const double md = static_cast<double>(m);
    const double h = (suffix[idx] - cnt * t) / md;
    const double m2 =
        (suffix_sq[idx] - 2.0 * t * suffix[idx] + cnt * t * t) / md;
    double var = m2 - h * h;
    if (var < 0.0) var = 0.0;
    if (m > 1) var *= md / static_cast<double>(m - 1);
    return {h, 3.0 * std::sqrt(var / md)};
  }
};

double quantile_of_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t m = sorted.size();
  std::size_t idx = static_cast<std::size_t>(p * static_cast<double>(m));
  if (idx >= m) idx = m - 1;
  return sorted[idx];
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  if (!(hi > lo)) hi = lo * 2.0 + 1.0;
  std::vector<double> grid(points);
  const double step =
      std::log(hi / lo) / static_cast<double>(points > 1 ? points - 1 : 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo * std::exp(step * static_cast<double>(i));
  // guard against rounding producing a non-increasing pair
  for (std::size_t i = 1; i < points; ++i)
    if (grid[i] <= grid[i - 1])
      grid[i] = std::nextafter(grid[i - 1], 1e300);
  return grid;
}

}  // namespace

TailFunctionalCurve tail_functional(
    const std::vector<std::vector<double>>& samples, double r,
    std::vector<double> a_grid) {
  if (!(r > 0.0)) throw config_error("r must be > 0");
  if (samples.empty()) throw config_error("no samples given");
  require_grid(a_grid, true, "a");

  TailFunctionalCurve curve;
  curve.r = r;
  curve.a_grid = std::move(a_grid);
  curve.values.reserve(samples.size());
  curve.half_widths.reserve(samples.size());

  for (const auto& sample : samples) {
    if (sample.empty()) throw config_error("empty sample");
    const std::size_t m = sample.size();
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = std::pow(std::abs(sample[i]), r);
    std::sort(v.begin(), v.end(), std::greater<double>());
    std::vector<double> prefix(m + 1, 0.0), prefix_sq(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      prefix[k + 1] = prefix[k] + v[k];
      prefix_sq[k + 1] = prefix_sq[k] + v[k] * v[k];
    }
    std::vector<double> row(curve.a_grid.size());
    std::vector<double> hw(curve.a_grid.size());
    const double md = static_cast<double>(m);
    for (std::size_t ai = 0; ai < curve.a_grid.size(); ++ai) {
      const double a = curve.a_grid[ai];
      const std::size_t k = static_cast<std::size_t>(
          std::lower_bound(v.begin(), v.end(), a, std::greater<double>()) -
          v.begin());
      const double est = prefix[k] / md;
      double var = prefix_sq[k] / md - est * est;
      if (var < 0.0) var = 0.0;
      if (m > 1) var *= md / static_cast<double>(m - 1);
      row[ai] = est;
      hw[ai] = 3.0 * std::sqrt(var / md);
    }
    curve.values.push_back(std::move(row));
    curve.half_widths.push_back(std::move(hw));
  }
  return curve;
}

UiMomentReport check_ui_sufficient(
    const std::vector<std::vector<double>>& samples, double delta,
    double cap) {
  if (!(delta > 0.0)) throw config_error("delta must be > 0");
  if (samples.empty()) throw config_error("no samples given");
  UiMomentReport report;
  report.delta = delta;
  report.cap = cap;
  double worst = 0.0;
  for (const auto& sample : samples) {
    if (sample.empty()) throw config_error("empty sample");
    std::vector<double> v(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
      v[i] = std::pow(std::abs(sample[i]), 1.0 + delta);
    const MeanEstimate est = mean_with_half_width(v);
    report.estimates.push_back(est.mean);
    report.half_widths.push_back(est.half_width);
    worst = std::max(worst, est.mean + est.half_width);
    report.max_estimate = std::max(report.max_estimate, est.mean);
  }
  report.pass = worst <= cap;
  return report;
}

SurvivorCurve integrated_survivor(std::span<const double> sample,
                                  std::vector<double> t_grid) {
  if (sample.empty()) throw config_error("empty sample");
  require_grid(t_grid, false, "t");
  const SortedSuffix ss(sample);
  SurvivorCurve curve;
  curve.t_grid = std::move(t_grid);
  curve.h_values.reserve(curve.t_grid.size());
  curve.half_widths.reserve(curve.t_grid.size());
  for (const double t : curve.t_grid) {
    const auto [h, hw] = ss.h_at(t);
    curve.h_values.push_back(h);
    curve.half_widths.push_back(hw);
  }
  return curve;
}

std::string to_string(IcVerdict v) {
  switch (v) {
    case IcVerdict::LeqIc: return "leq_ic";
    case IcVerdict::GeqIc: return "geq_ic";
    case IcVerdict::Crossing: return "crossing";
    case IcVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

IcComparison ic_compare(std::span<const double> sample1,
                        std::span<const double> sample2,
                        std::vector<double> t_grid) {
  for (const double x : sample1)
    if (x < 0.0) throw config_error("ic_compare requires nonnegative samples");
  for (const double x : sample2)
    if (x < 0.0) throw config_error("ic_compare requires nonnegative samples");
  if (sample1.empty() || sample2.empty()) throw config_error("empty sample");
  require_grid(t_grid, false, "t");

  const SortedSuffix ss1(sample1);
  const SortedSuffix ss2(sample2);

  IcComparison cmp;
  cmp.t_grid = std::move(t_grid);
  const std::size_t T = cmp.t_grid.size();
  cmp.h1.resize(T);
  cmp.h2.resize(T);
  cmp.margin.resize(T);
  cmp.slack.resize(T);

  bool above = false;  // h1 significantly above h2 somewhere
  bool below = false;
  double max_abs_margin = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const auto [h1, w1] = ss1.h_at(cmp.t_grid[i]);
    const auto [h2, w2] = ss2.h_at(cmp.t_grid[i]);
    cmp.h1[i] = h1;
    cmp.h2[i] = h2;
    cmp.margin[i] = h1 - h2;
    cmp.slack[i] = w1 + w2;
    if (h1 > h2 + cmp.slack[i]) above = true;
    if (h2 > h1 + cmp.slack[i]) below = true;
    max_abs_margin = std::max(max_abs_margin, std::abs(cmp.margin[i]));
  }

  if (above && below) cmp.verdict = IcVerdict::Crossing;
  else if (above) cmp.verdict = IcVerdict::GeqIc;
  else if (below) cmp.verdict = IcVerdict::LeqIc;
  else if (max_abs_margin == 0.0) cmp.verdict = IcVerdict::LeqIc;
  else cmp.verdict = IcVerdict::Inconclusive;
  return cmp;
}

std::vector<double> default_t_grid(std::span<const double> sample1,
                                   std::span<const double> sample2,
                                   std::size_t points) {
  std::vector<double> all(sample1.begin(), sample1.end());
  all.insert(all.end(), sample2.begin(), sample2.end());
  if (all.empty()) throw config_error("empty sample");
  std::sort(all.begin(), all.end());
  const double hi = std::max(all.back() * 1.5, 1e-9);
  double lo = std::max(quantile_of_sorted(all, 0.05), hi * 1e-6);
  if (!(lo > 0.0)) lo = hi * 1e-6;
  std::vector<double> grid = geometric_grid(lo, hi, points > 1 ? points - 1 : 1);
  grid.insert(grid.begin(), 0.0);
  return grid;
}

std::vector<double> default_a_grid(
    const std::vector<std::vector<double>>& samples, double r,
    std::size_t points) {
  std::vector<double> all;
  for (const auto& s : samples)
    for (const double x : s) all.push_back(std::pow(std::abs(x), r));
  if (all.empty()) throw config_error("empty sample");
  std::sort(all.begin(), all.end());
  const double hi = std::max(all.back() * 1.5, 1e-9);
  double lo = std::max(quantile_of_sorted(all, 0.05), hi * 1e-6);
  if (!(lo > 0.0)) lo = hi * 1e-6;
  return geometric_grid(lo, hi, points);
}

}  // namespace mgap
