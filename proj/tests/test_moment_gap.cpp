#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgap/errors.hpp"
#include "mgap/innovations.hpp"
#include "mgap/moment_gap.hpp"
#include "mgap/rng.hpp"

namespace {

std::pair<std::vector<double>, std::vector<double>> gaussian_pairs(
    std::size_t count, std::uint64_t seed, double shift = 0.0,
    double scale = 1.0) {
  mgap::RandomStream s({seed, 0, 0});
  std::vector<double> x(count), y(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = s.normal();
    y[i] = scale * s.normal() + shift;
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

TEST_CASE("gap quantities on constant samples have closed forms") {
  const std::vector<double> x(16, 3.0);
  const std::vector<double> y(16, 1.0);
  const auto row = mgap::gap_row(16, x, y, 2.0);
  CHECK(row.gap_lr == 4.0);           // |3-1|^2
  CHECK(row.gap_abs_moment == 8.0);   // 9 - 1
  CHECK(row.gap_norm == 2.0);         // 3 - 1
  REQUIRE(row.gap_mean.has_value());
  CHECK(*row.gap_mean == 2.0);
  CHECK(row.hw_lr == 0.0);
  CHECK(row.replications == 16);
}

TEST_CASE("a constant offset is recovered exactly at r = 1") {
  std::vector<double> x(64), y(64);
  for (int i = 0; i < 64; ++i) {
    x[i] = static_cast<double>(i + 1);
    y[i] = x[i] + 0.25;
  }
  const auto row = mgap::gap_row(64, x, y, 1.0);
  CHECK(row.gap_lr == 0.25);
  REQUIRE(row.gap_mean.has_value());
  CHECK(*row.gap_mean == 0.25);
}

TEST_CASE("the mean gap column only exists for r >= 1") {
  const auto [x, y] = gaussian_pairs(100, 31);
  CHECK_FALSE(mgap::gap_row(100, x, y, 0.7).gap_mean.has_value());
  CHECK(mgap::gap_row(100, x, y, 1.0).gap_mean.has_value());
  CHECK(mgap::gap_row(100, x, y, 2.5).gap_mean.has_value());
}

TEST_CASE("identical samples give zero gaps") {
  const auto [x, y_unused] = gaussian_pairs(1000, 32);
  for (const double r : {0.5, 1.0, 2.0}) {
    const auto row = mgap::gap_row(1000, x, x, r);
    CHECK(row.gap_lr == 0.0);
    CHECK(row.gap_abs_moment == 0.0);
    CHECK(row.gap_norm == 0.0);
  }
}

TEST_CASE("absolute-moment gap is dominated by the coupled gap for r <= 1") {
  const auto [x, y] = gaussian_pairs(100000, 33, 0.5, 1.3);
  for (const double r : {0.3, 0.7, 1.0}) {
    const auto row = mgap::gap_row(100000, x, y, r);
    CHECK(row.gap_abs_moment <= row.gap_lr + 1e-12);
  }
}

TEST_CASE("pointwise power inequality has no violations on random pairs") {
  const auto [x, y] = gaussian_pairs(100000, 34, -0.2, 2.0);
  for (const double r : {0.1, 0.5, 0.9, 1.0})
    CHECK(mgap::verify_pointwise_inequalities(x, y, r) == 0);
}

TEST_CASE("pointwise power inequality rejects exponents above one") {
  const auto [x, y] = gaussian_pairs(10, 35);
  CHECK_THROWS_AS(mgap::verify_pointwise_inequalities(x, y, 1.5),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::verify_pointwise_inequalities(x, y, 0.0),
                  mgap::config_error);
}

TEST_CASE("splitting inequality has no violations on random pairs") {
  const auto [x, y] = gaussian_pairs(100000, 36, 1.0, 0.5);
  for (const double r : {0.5, 1.0, 2.0, 3.0})
    CHECK(mgap::verify_cr_inequality(x, y, r) == 0);
}

TEST_CASE("norm-difference bound holds and is tight for shifted copies") {
  const auto [x, y] = gaussian_pairs(100000, 37, 0.7, 1.0);
  for (const double r : {1.0, 2.0, 3.5}) {
    const auto check = mgap::verify_minkowski_gap(x, y, r);
    CHECK(check.holds);
    CHECK(check.lhs <= check.rhs + 1e-12);
  }
  CHECK_THROWS_AS(mgap::verify_minkowski_gap(x, y, 0.5), mgap::config_error);

  // equality case: y = x + c with x, y >= 0 makes both sides exactly c at r=1
  std::vector<double> a(64), b(64);
  for (int i = 0; i < 64; ++i) {
    a[i] = static_cast<double>(i);
    b[i] = a[i] + 2.0;
  }
  const auto eq = mgap::verify_minkowski_gap(a, b, 1.0);
  CHECK(eq.lhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eq.rhs == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gap report carries one row per sample in order") {
  std::vector<mgap::CoupledSample> pairs;
  for (const long n : {10L, 100L}) {
    const auto [x, y] = gaussian_pairs(500, 38 + static_cast<std::uint64_t>(n));
    pairs.push_back({n, x, y});
  }
  const auto report = mgap::gap_report(pairs, 1.0);
  CHECK(report.r == 1.0);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].n == 10);
  CHECK(report.rows[1].n == 100);
  CHECK_THROWS_AS(mgap::gap_report(std::vector<mgap::CoupledSample>{}, 1.0),
                  mgap::config_error);
}

TEST_CASE("shape errors are rejected") {
  const std::vector<double> x = {1.0, 2.0};
  const std::vector<double> y = {1.0};
  CHECK_THROWS_AS(mgap::gap_row(2, x, y, 1.0), mgap::config_error);
  CHECK_THROWS_AS(
      mgap::gap_row(0, std::vector<double>{}, std::vector<double>{}, 1.0),
      mgap::config_error);
  CHECK_THROWS_AS(mgap::gap_row(2, x, x, -1.0), mgap::config_error);
}

TEST_CASE("half-widths shrink like the square root of the sample size") {
  const auto [x1, y1] = gaussian_pairs(1000, 39);
  const auto [x2, y2] = gaussian_pairs(64000, 39);
  const double hw_small = mgap::gap_row(1, x1, y1, 1.0).hw_lr;
  const double hw_big = mgap::gap_row(1, x2, y2, 1.0).hw_lr;
  CHECK(hw_big < hw_small);
  CHECK(hw_big * 4.0 < hw_small * 1.0 + 1e-9);  // ratio near sqrt(64) = 8
}
