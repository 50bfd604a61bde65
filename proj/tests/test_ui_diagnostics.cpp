#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgap/errors.hpp"
#include "mgap/rng.hpp"
#include "mgap/ui_diagnostics.hpp"

using mgap::IcVerdict;

namespace {

std::vector<double> uniform_sample(double lo, double hi, std::size_t count,
                                   std::uint64_t seed) {
  mgap::RandomStream s({seed, 0, 0});
  std::vector<double> v(count);
  for (double& x : v) x = lo + (hi - lo) * s.uniform01();
  return v;
}

std::vector<double> exponential_sample(double rate, std::size_t count,
                                       std::uint64_t seed) {
  mgap::RandomStream s({seed, 0, 0});
  std::vector<double> v(count);
  for (double& x : v) x = s.exponential(rate);
  return v;
}

}  // namespace

TEST_CASE("tail functional is exact on a two-point sample") {
  // 100 spikes of height 10 among 1000 draws: mass above 5 is exactly 1
  std::vector<double> sample(1000, 0.0);
  for (int i = 0; i < 100; ++i) sample[static_cast<std::size_t>(i * 10)] = 10.0;
  const auto curve = mgap::tail_functional({sample}, 1.0, {5.0, 25.0});
  CHECK(curve.values[0][0] == 1.0);
  CHECK(curve.values[0][1] == 0.0);
  CHECK(curve.half_widths[0][1] == 0.0);
}

TEST_CASE("tail functional uses a strict threshold") {
  const std::vector<double> sample = {4.0};
  const auto curve = mgap::tail_functional({sample}, 1.0, {1.0, 4.0, 20.0});
  CHECK(curve.values[0][0] == 4.0);
  CHECK(curve.values[0][1] == 0.0);  // 4 > 4 is false
  CHECK(curve.values[0][2] == 0.0);
}

TEST_CASE("tail functional rows are non-increasing in the threshold") {
  const auto sample = exponential_sample(1.0, 20000, 61);
  const auto grid = mgap::default_a_grid({sample}, 1.5);
  const auto curve = mgap::tail_functional({sample}, 1.5, grid);
  for (std::size_t j = 1; j < grid.size(); ++j)
    CHECK(curve.values[0][j] <= curve.values[0][j - 1]);
}

TEST_CASE("tail functional validates inputs") {
  const std::vector<double> ok = {1.0};
  CHECK_THROWS_AS(mgap::tail_functional({}, 1.0, {1.0}), mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_functional({{}}, 1.0, {1.0}), mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_functional({ok}, 0.0, {1.0}), mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_functional({ok}, 1.0, {}), mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_functional({ok}, 1.0, {2.0, 1.0}),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_functional({ok}, 1.0, {0.0, 1.0}),
                  mgap::config_error);
}

TEST_CASE("moment cap check passes a unit gaussian and flags a spike") {
  mgap::RandomStream s({62, 0, 0});
  std::vector<double> gauss(100000);
  for (double& x : gauss) x = s.normal();
  const auto ok = mgap::check_ui_sufficient({gauss}, 1.0, 2.0);
  CHECK(ok.pass);
  CHECK(ok.max_estimate == doctest::Approx(1.0).epsilon(0.05));

  // X = n with probability 1/n: mean |X|^2 = n, far above any small cap
  std::vector<double> spike(100000, 0.0);
  for (int i = 0; i < 1000; ++i) spike[static_cast<std::size_t>(i)] = 100.0;
  const auto bad = mgap::check_ui_sufficient({gauss, spike}, 1.0, 5.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_estimate > 5.0);
  CHECK(bad.estimates.size() == 2);
}

TEST_CASE("integrated survivor curve is exact on a three-point sample") {
  const std::vector<double> sample = {1.0, 2.0, 3.0};
  const auto curve =
      mgap::integrated_survivor(sample, {0.0, 1.0, 2.5, 3.0, 5.0});
  CHECK(curve.h_values[0] == 2.0);                                // the mean
  CHECK(curve.h_values[1] == 1.0);                                // (0+1+2)/3
  CHECK(curve.h_values[2] == doctest::Approx(0.5 / 3.0).epsilon(1e-15));
  CHECK(curve.h_values[3] == 0.0);
  CHECK(curve.h_values[4] == 0.0);
  CHECK(curve.half_widths[3] == 0.0);
}

TEST_CASE("integrated survivor matches the exponential closed form") {
  const auto sample = exponential_sample(1.0, 1000000, 63);
  const auto curve = mgap::integrated_survivor(sample, {1.0});
  // H(1) = e^{-1}; the curve's own 3-sigma half-width brackets it
  CHECK(std::abs(curve.h_values[0] - std::exp(-1.0)) <
        curve.half_widths[0] + 1e-9);
  CHECK(std::abs(curve.h_values[0] - std::exp(-1.0)) < 0.005);
}

TEST_CASE("integrated survivor is non-increasing and convex") {
  const auto sample = exponential_sample(0.7, 20000, 64);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
  const auto curve = mgap::integrated_survivor(sample, grid);
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(curve.h_values[i] <= curve.h_values[i - 1] + 1e-15);
  for (std::size_t i = 2; i < grid.size(); ++i) {
    const double second = curve.h_values[i] - 2.0 * curve.h_values[i - 1] +
                          curve.h_values[i - 2];
    CHECK(second >= -1e-12);
  }
}

TEST_CASE("curve comparison declares a clear one-sided ordering") {
  // Exp(1) vs Exp(1/2): e^{-t} <= 2 e^{-t/2} everywhere
  const auto s1 = exponential_sample(1.0, 100000, 65);
  const auto s2 = exponential_sample(0.5, 100000, 66);
  const auto grid = mgap::default_t_grid(s1, s2);
  const auto cmp = mgap::ic_compare(s1, s2, grid);
  CHECK(cmp.verdict == IcVerdict::LeqIc);
  CHECK(mgap::to_string(cmp.verdict) == "leq_ic");
  // and the reversed comparison is the mirror image
  CHECK(mgap::ic_compare(s2, s1, grid).verdict == IcVerdict::GeqIc);
}

TEST_CASE("nested-mean uniform pair orders despite a variance gap") {
  // U(0,3) vs U(1,2): equal means, curve 1 sits above curve 2 everywhere,
  // with the largest margin (t^2/6 at t=1, peaking near 1/4 at t=1.5)
  // well outside Monte Carlo slack at this size
  const auto s1 = uniform_sample(0.0, 3.0, 100000, 67);
  const auto s2 = uniform_sample(1.0, 2.0, 100000, 68);
  const auto cmp =
      mgap::ic_compare(s1, s2, mgap::default_t_grid(s1, s2));
  CHECK(cmp.verdict == IcVerdict::GeqIc);
}

TEST_CASE("curves that genuinely cross are reported as crossing") {
  // U(1.1,2) has the larger mean, so its curve starts higher, but it dies
  // at 2 while U(0,3) stays positive: significant wins in both directions
  const auto s1 = uniform_sample(0.0, 3.0, 100000, 69);
  const auto s2 = uniform_sample(1.1, 2.0, 100000, 70);
  const auto cmp =
      mgap::ic_compare(s1, s2, mgap::default_t_grid(s1, s2));
  CHECK(cmp.verdict == IcVerdict::Crossing);
}

TEST_CASE("comparing a sample against itself is a clean lower ordering") {
  const auto s = exponential_sample(1.0, 5000, 71);
  const auto cmp = mgap::ic_compare(s, s, mgap::default_t_grid(s, s));
  CHECK(cmp.verdict == IcVerdict::LeqIc);
  for (const double m : cmp.margin) CHECK(m == 0.0);
}

TEST_CASE("curve comparison requires nonnegative samples") {
  const std::vector<double> neg = {1.0, -0.5};
  const std::vector<double> pos = {1.0, 0.5};
  CHECK_THROWS_AS(mgap::ic_compare(neg, pos, {0.0, 1.0}), mgap::config_error);
  CHECK_THROWS_AS(mgap::ic_compare(pos, neg, {0.0, 1.0}), mgap::config_error);
}

TEST_CASE("default grids are strictly increasing and start where required") {
  const auto s1 = exponential_sample(1.0, 5000, 72);
  const auto s2 = exponential_sample(2.0, 5000, 73);
  const auto t = mgap::default_t_grid(s1, s2);
  CHECK(t.front() == 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  const auto a = mgap::default_a_grid({s1, s2}, 1.0);
  CHECK(a.front() > 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] > a[i - 1]);
}
