#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgap/ar1.hpp"
#include "mgap/errors.hpp"

using mgap::Ar1Config;
using mgap::InnovationSpec;
using mgap::TruncationRule;
using mgap::UncertaintyRule;

namespace {

Ar1Config base_config() {
  Ar1Config cfg;
  cfg.rho = 0.5;
  cfg.mu = 0.0;
  cfg.innovation = InnovationSpec::gaussian(1.0);
  cfg.uncertainty_rule = UncertaintyRule::zero();
  cfg.truncation_rule = TruncationRule::ceil_log2_times(2.0);
  return cfg;
}

}  // namespace

TEST_CASE("uncertainty rules evaluate and average exactly") {
  const auto zero = UncertaintyRule::zero();
  CHECK(zero.at(5) == 0.0);
  CHECK(zero.cesaro_mean(100) == 0.0);

  const auto inv = UncertaintyRule::inverse_index();
  CHECK(inv.at(1) == 1.0);
  CHECK(inv.at(4) == 0.25);
  // (1 + 1/2 + 1/3 + 1/4) / 4
  CHECK(inv.cesaro_mean(4) == doctest::Approx(25.0 / 48.0).epsilon(1e-15));

  const auto custom = UncertaintyRule::custom({1.0, 2.0, 3.0});
  CHECK(custom.at(2) == 2.0);
  CHECK(custom.cesaro_mean(3) == 2.0);
  CHECK_THROWS_AS(custom.at(4), mgap::config_error);
  CHECK_THROWS_AS(custom.cesaro_mean(4), mgap::config_error);
  CHECK_THROWS_AS(inv.at(0), mgap::config_error);
  CHECK_THROWS_AS(inv.cesaro_mean(0), mgap::config_error);
}

TEST_CASE("truncation rules produce the declared cutoffs") {
  const auto log_rule = TruncationRule::ceil_log2_times(2.0);
  CHECK(log_rule.q_at(1) == 0);
  CHECK(log_rule.q_at(2) == 2);      // ceil(2 * 1)
  CHECK(log_rule.q_at(100) == 14);   // ceil(2 * 6.64...)
  CHECK(log_rule.q_at(1024) == 20);  // exact power of two
  const auto fixed = TruncationRule::fixed(7);
  CHECK(fixed.q_at(1) == 7);
  CHECK(fixed.q_at(1000000) == 7);
  CHECK_THROWS_AS(TruncationRule::fixed(-1).q_at(10), mgap::config_error);
  CHECK_THROWS_AS(log_rule.q_at(0), mgap::config_error);
}

TEST_CASE("configuration validation names the bad field") {
  Ar1Config cfg = base_config();
  cfg.rho = 1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), "rho must lie in (-1,1)",
                       mgap::config_error);
  cfg = base_config();
  cfg.series_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), mgap::config_error);
  cfg = base_config();
  cfg.innovation.sigma2 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), mgap::config_error);
}

TEST_CASE("burn-in is the smallest length meeting the series tolerance") {
  Ar1Config cfg = base_config();
  const std::size_t j = mgap::burn_in_length(cfg);
  CHECK(j == 40);
  const auto l2_tail = [&](std::size_t jj) {
    return std::pow(0.5, static_cast<double>(jj + 1)) / std::sqrt(0.75);
  };
  CHECK(l2_tail(j) < cfg.series_tolerance);
  CHECK(l2_tail(j - 1) >= cfg.series_tolerance);

  cfg.rho = 0.0;
  CHECK(mgap::burn_in_length(cfg) == 0);

  cfg = base_config();
  cfg.series_tolerance = 10.0;  // already below tolerance with no burn-in
  CHECK(mgap::burn_in_length(cfg) == 0);
}

TEST_CASE("over-long paths are refused, not silently shortened") {
  Ar1Config cfg = base_config();
  cfg.rho = 0.99;
  cfg.max_path_length = 1000;
  CHECK_THROWS_AS(mgap::simulate_pair(cfg, 10, 10, {1, 0, 0}),
                  mgap::resource_error);
}

TEST_CASE("coupled draws are reproducible and worker-invariant") {
  const Ar1Config cfg = base_config();
  const auto a = mgap::simulate_pair(cfg, 50, 500, {3, 0, 0}, 1);
  const auto b = mgap::simulate_pair(cfg, 50, 500, {3, 0, 0}, 4);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.x_obs_mean == b.x_obs_mean);
  const auto c = mgap::simulate_pair(cfg, 50, 500, {4, 0, 0}, 1);
  CHECK(a.x != c.x);
}

TEST_CASE("keeping the whole path makes the surrogate an exact identity") {
  // q >= path length replays the full recursion, so y - x must equal the
  // observed mean up to final-addition rounding
  Ar1Config cfg = base_config();
  cfg.truncation_rule = TruncationRule::full_path();
  const auto s = mgap::simulate_pair(cfg, 100, 2000, {5, 0, 0});
  for (std::size_t m = 0; m < s.replications; ++m) {
    const double lhs = s.y[m] - s.x[m];
    CHECK(std::abs(lhs - s.x_obs_mean[m]) <
          1e-12 * (1.0 + std::abs(s.x[m]) + std::abs(s.x_obs_mean[m])));
  }
}

TEST_CASE("a cutoff at the burn-in length leaves only sub-tolerance tail") {
  Ar1Config cfg = base_config();
  cfg.truncation_rule = TruncationRule::fixed(40);  // burn-in length here
  const auto s = mgap::simulate_pair(cfg, 200, 2000, {6, 0, 0});
  // (y - xbar_obs) and (x - mu) differ by the cut innovations, whose L2
  // norm is below the series tolerance; 2000 gaussian draws stay inside a
  // 10-sigma band of that
  double worst = 0.0;
  for (std::size_t m = 0; m < s.replications; ++m) {
    const double kept = s.y[m] - s.x_obs_mean[m];
    const double full = s.x[m] - cfg.mu;
    worst = std::max(worst, std::abs(kept - full));
  }
  CHECK(worst < 1e-11);
  CHECK(worst > 0.0);  // the cutoff is genuinely shorter than the path
}

TEST_CASE("the marginal law has the stationary mean and variance") {
  Ar1Config cfg = base_config();
  cfg.mu = 2.0;
  const std::size_t M = 50000;
  const auto s = mgap::simulate_pair(cfg, 1, M, {7, 0, 0});
  double sum = 0.0;
  for (const double x : s.x) sum += x;
  const double mean = sum / static_cast<double>(M);
  double ss = 0.0;
  for (const double x : s.x) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(M - 1);
  // Var X = sigma^2 / (1 - rho^2) = 4/3
  CHECK(std::abs(mean - 2.0) < 0.03);
  CHECK(std::abs(var - 4.0 / 3.0) < 0.05);
}

TEST_CASE("the sample records its generating fingerprint") {
  Ar1Config cfg = base_config();
  cfg.uncertainty_rule = UncertaintyRule::inverse_index();
  const auto s = mgap::simulate_pair(cfg, 64, 100, {8, 0, 0});
  CHECK(s.rho == cfg.rho);
  CHECK(s.mu == cfg.mu);
  CHECK(s.q_used == cfg.truncation_rule.q_at(64));
  CHECK(s.ebar == doctest::Approx(cfg.uncertainty_rule.cesaro_mean(64))
                      .epsilon(1e-15));
}

TEST_CASE("tail probability bound matches its geometric series") {
  // frozen value of (1/0.01) * 0.25^11 / 0.75
  CHECK(mgap::tail_sum_probability_bound(0.5, 1.0, 10, 0.1) ==
        doctest::Approx(3.1789143880208333e-05).epsilon(1e-14));

  // independent route: partial sums of the series it closes
  const double rho = 0.9, sigma2 = 2.0, eps = 0.5;
  const long q = 50;
  long double partial = 0.0L;
  for (long j = q + 1; j < q + 2000; ++j)
    partial += std::pow(static_cast<long double>(rho * rho),
                        static_cast<long double>(j));
  const double expected =
      static_cast<double>(partial) * sigma2 / (eps * eps);
  CHECK(mgap::tail_sum_probability_bound(rho, sigma2, q, eps) ==
        doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(mgap::tail_sum_probability_bound(1.0, 1.0, 10, 0.1),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_sum_probability_bound(0.5, 0.0, 10, 0.1),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_sum_probability_bound(0.5, 1.0, -1, 0.1),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::tail_sum_probability_bound(0.5, 1.0, 10, 0.0),
                  mgap::config_error);
}

TEST_CASE("per-replication decomposition holds with slack tolerance") {
  Ar1Config cfg = base_config();
  cfg.mu = 1.0;
  cfg.uncertainty_rule = UncertaintyRule::inverse_index();
  const auto s = mgap::simulate_pair(cfg, 100, 500, {9, 0, 0});
  const auto check = mgap::decomposition_bound(cfg, 100, s);
  CHECK(check.all_hold);
  CHECK(check.uncertainty_term.size() == 500);
  for (const double u : check.uncertainty_term)
    CHECK(u == doctest::Approx(std::abs(s.ebar)).epsilon(1e-15));
}

TEST_CASE("decomposition rejects samples from a different configuration") {
  Ar1Config cfg = base_config();
  const auto s = mgap::simulate_pair(cfg, 100, 50, {10, 0, 0});
  Ar1Config other = cfg;
  other.mu = 5.0;
  CHECK_THROWS_AS(mgap::decomposition_bound(other, 100, s),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::decomposition_bound(cfg, 99, s), mgap::config_error);
}

TEST_CASE("input bounds on n and M are enforced") {
  const Ar1Config cfg = base_config();
  CHECK_THROWS_AS(mgap::simulate_pair(cfg, 0, 10, {1, 0, 0}),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::simulate_pair(cfg, 10, 0, {1, 0, 0}),
                  mgap::config_error);
}
