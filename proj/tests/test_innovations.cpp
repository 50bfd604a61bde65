#include <doctest.h>

#include <cmath>
#include <vector>

#include "mgap/errors.hpp"
#include "mgap/innovations.hpp"
#include "mgap/rng.hpp"

using mgap::InnovationSpec;
using mgap::RandomStream;

TEST_CASE("innovation parameter validation") {
  CHECK_THROWS_AS(InnovationSpec::gaussian(0.0).validate(), mgap::config_error);
  CHECK_THROWS_AS(InnovationSpec::gaussian(-1.0).validate(), mgap::config_error);
  CHECK_THROWS_AS(InnovationSpec::student_t(4.0).validate(), mgap::config_error);
  CHECK_THROWS_AS(InnovationSpec::student_t(5.0, -1.0).validate(),
                  mgap::config_error);
  CHECK_THROWS_AS(InnovationSpec::centered_exponential(0.0).validate(),
                  mgap::config_error);
  CHECK_THROWS_AS(InnovationSpec::scaled_uniform(0.0).validate(),
                  mgap::config_error);
  CHECK_NOTHROW(InnovationSpec::student_t(4.5).validate());
}

TEST_CASE("closed-form moments of each family") {
  const auto g = InnovationSpec::gaussian(2.0);
  CHECK(mgap::moments_of(g, 1) == 0.0);
  CHECK(mgap::moments_of(g, 2) == 2.0);
  CHECK(mgap::moments_of(g, 3) == 0.0);
  CHECK(mgap::moments_of(g, 4) == doctest::Approx(12.0).epsilon(1e-15));

  const auto t = InnovationSpec::student_t(9.0, 2.0);
  CHECK(t.variance() == 2.0);
  // 3 sigma^4 (nu-2)/(nu-4) = 3 * 4 * 7 / 5
  CHECK(mgap::moments_of(t, 4) == doctest::Approx(16.8).epsilon(1e-15));

  const auto e = InnovationSpec::centered_exponential(2.0);
  CHECK(e.variance() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mgap::moments_of(e, 3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mgap::moments_of(e, 4) == doctest::Approx(0.5625).epsilon(1e-15));

  const auto u = InnovationSpec::scaled_uniform(2.0);
  CHECK(u.variance() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(mgap::moments_of(u, 3) == 0.0);
  CHECK(mgap::moments_of(u, 4) == doctest::Approx(3.2).epsilon(1e-15));

  CHECK_THROWS_AS(mgap::moments_of(g, 0), mgap::config_error);
  CHECK_THROWS_AS(mgap::moments_of(g, 5), mgap::config_error);
}

TEST_CASE("family names are stable identifiers") {
  CHECK(InnovationSpec::gaussian().family_name() == "gaussian");
  CHECK(InnovationSpec::student_t(5.0).family_name() == "student_t");
  CHECK(InnovationSpec::centered_exponential().family_name() ==
        "centered_exponential");
  CHECK(InnovationSpec::scaled_uniform().family_name() == "scaled_uniform");
}

namespace {

// Empirical central moments against the declared ones, with CLT bands.
// StudentT uses nu = 9 so even the fourth power has a finite variance.
void check_sample_moments(const InnovationSpec& spec, std::uint64_t seed) {
  RandomStream stream({seed, 0, 0});
  const std::size_t n = 200000;
  const std::vector<double> draws = mgap::sample_innovations(spec, n, stream);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (const double x : draws) {
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  const double nd = static_cast<double>(n);
  const double m2 = mgap::moments_of(spec, 2);
  const double m3 = mgap::moments_of(spec, 3);
  const double m4 = mgap::moments_of(spec, 4);
  // conservative 5-sigma bands using the exact next-order moments
  CHECK(std::abs(s1 / nd) < 5.0 * std::sqrt(m2 / nd));
  CHECK(std::abs(s2 / nd - m2) < 5.0 * std::sqrt((m4 - m2 * m2) / nd) + 1e-12);
  const double var3 = std::max(m4 * m2 * 9.0, 1e-12);  // loose proxy for Var x^3
  CHECK(std::abs(s3 / nd - m3) < 5.0 * std::sqrt(var3 / nd) + 1e-3);
  CHECK(std::abs(s4 / nd - m4) < 0.25 * m4 + 1e-12);
}

}  // namespace

TEST_CASE("samples reproduce the declared moments") {
  check_sample_moments(InnovationSpec::gaussian(1.0), 101);
  check_sample_moments(InnovationSpec::gaussian(3.0), 102);
  check_sample_moments(InnovationSpec::student_t(9.0, 1.0), 103);
  check_sample_moments(InnovationSpec::centered_exponential(1.0), 104);
  check_sample_moments(InnovationSpec::centered_exponential(3.0), 105);
  check_sample_moments(InnovationSpec::scaled_uniform(1.0), 106);
  check_sample_moments(InnovationSpec::scaled_uniform(2.5), 107);
}

TEST_CASE("scaled uniform draws stay inside the support") {
  const auto spec = InnovationSpec::scaled_uniform(1.5);
  RandomStream stream({55, 0, 0});
  for (int i = 0; i < 50000; ++i) {
    const double x = mgap::sample_one(spec, stream);
    CHECK(std::abs(x) <= 1.5);
  }
}

TEST_CASE("centered exponential draws are bounded below") {
  const auto spec = InnovationSpec::centered_exponential(2.0);
  RandomStream stream({56, 0, 0});
  for (int i = 0; i < 50000; ++i)
    CHECK(mgap::sample_one(spec, stream) > -0.5);
}

TEST_CASE("sampling is deterministic per key") {
  const auto spec = InnovationSpec::student_t(6.0, 1.0);
  RandomStream a({77, 2, 0});
  RandomStream b({77, 2, 0});
  const auto va = mgap::sample_innovations(spec, 1000, a);
  const auto vb = mgap::sample_innovations(spec, 1000, b);
  CHECK(va == vb);
}
