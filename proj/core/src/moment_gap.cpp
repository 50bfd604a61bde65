#include "mgap/moment_gap.hpp"

#include <cmath>

#include "mgap/errors.hpp"
#include "mgap/summation.hpp"

namespace mgap {
namespace {

constexpr double kIneqTol = 1e-12;

void check_pair_shape(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw config_error("x and y lengths differ");
  if (x.empty()) throw config_error("empty sample");
}

}  // namespace

CoupledSample as_coupled(const ProcessPairSample& sample) {
  return {sample.n, sample.x, sample.y};
}

GapRow gap_row(long n, std::span<const double> x, std::span<const double> y,
               double r) {
  check_pair_shape(x, y);
  if (!(r > 0.0)) throw config_error("r must be > 0");
  const std::size_t M = x.size();

  std::vector<double> dabs(M), xabs(M), yabs(M);
  for (std::size_t i = 0; i < M; ++i) {
    dabs[i] = std::pow(std::abs(x[i] - y[i]), r);
    xabs[i] = std::pow(std::abs(x[i]), r);
    yabs[i] = std::pow(std::abs(y[i]), r);
  }
  const MeanEstimate m_d = mean_with_half_width(dabs);
  const MeanEstimate m_x = mean_with_half_width(xabs);
  const MeanEstimate m_y = mean_with_half_width(yabs);

  GapRow row;
  row.n = n;
  row.replications = M;
  row.gap_lr = m_d.mean;
  row.gap_abs_moment = std::abs(m_x.mean - m_y.mean);
  row.gap_norm = std::abs(std::pow(m_x.mean, 1.0 / r) -
                          std::pow(m_y.mean, 1.0 / r));
  row.hw_lr = m_d.half_width;
  row.hw_abs_x = m_x.half_width;
  row.hw_abs_y = m_y.half_width;
  if (r >= 1.0) {
    const MeanEstimate mx = mean_with_half_width(x);
    const MeanEstimate my = mean_with_half_width(y);
    row.gap_mean = std::abs(mx.mean - my.mean);
    row.hw_mean_x = mx.half_width;
    row.hw_mean_y = my.half_width;
  }
  return row;
}

MomentGapReport gap_report(const std::vector<CoupledSample>& pairs, double r) {
  if (pairs.empty()) throw config_error("gap_report needs a nonempty n grid");
  MomentGapReport report;
  report.r = r;
  report.rows.reserve(pairs.size());
  for (const CoupledSample& p : pairs)
    report.rows.push_back(gap_row(p.n, p.x, p.y, r));
  return report;
}

MomentGapReport gap_report(const std::vector<ProcessPairSample>& pairs,
                           double r) {
  std::vector<CoupledSample> coupled;
  coupled.reserve(pairs.size());
  for (const ProcessPairSample& p : pairs) coupled.push_back(as_coupled(p));
  return gap_report(coupled, r);
}

std::size_t verify_pointwise_inequalities(std::span<const double> x,
                                          std::span<const double> y,
                                          double r) {
  check_pair_shape(x, y);
  if (!(r > 0.0) || r > 1.0)
    throw config_error("pointwise inequality requires r in (0,1]");
  std::size_t violations = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lhs =
        std::abs(std::pow(std::abs(x[i]), r) - std::pow(std::abs(y[i]), r));
    const double rhs = std::pow(std::abs(x[i] - y[i]), r);
    if (lhs > rhs + kIneqTol) ++violations;
  }
  return violations;
}

std::size_t verify_cr_inequality(std::span<const double> x,
                                 std::span<const double> y, double r) {
  check_pair_shape(x, y);
  if (!(r > 0.0)) throw config_error("r must be > 0");
  const double two_r = std::pow(2.0, r);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lhs = std::pow(std::abs(x[i] - y[i]), r);
    const double rhs =
        two_r * (std::pow(std::abs(x[i]), r) + std::pow(std::abs(y[i]), r));
    if (lhs > rhs + kIneqTol) ++violations;
  }
  return violations;
}

MinkowskiCheck verify_minkowski_gap(std::span<const double> x,
                                    std::span<const double> y, double r) {
  check_pair_shape(x, y);
  if (!(r >= 1.0)) throw config_error("Minkowski gap requires r >= 1");
  const std::size_t M = x.size();
  std::vector<double> xabs(M), yabs(M), dabs(M);
  for (std::size_t i = 0; i < M; ++i) {
    xabs[i] = std::pow(std::abs(x[i]), r);
    yabs[i] = std::pow(std::abs(y[i]), r);
    dabs[i] = std::pow(std::abs(x[i] - y[i]), r);
  }
  MinkowskiCheck check;
  check.lhs = std::abs(std::pow(mean(xabs), 1.0 / r) -
                       std::pow(mean(yabs), 1.0 / r));
  check.rhs = std::pow(mean(dabs), 1.0 / r);
  check.holds = check.lhs <= check.rhs + kIneqTol;
  return check;
}

}  // namespace mgap
