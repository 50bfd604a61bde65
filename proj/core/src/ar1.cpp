#include "mgap/ar1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgap/errors.hpp"
#include "mgap/parallel.hpp"

namespace mgap {

UncertaintyRule UncertaintyRule::zero() { return {Kind::Zero, {}}; }
UncertaintyRule UncertaintyRule::inverse_index() { return {Kind::InverseIndex, {}}; }
UncertaintyRule UncertaintyRule::custom(std::vector<double> values) {
  return {Kind::Custom, std::move(values)};
}

double UncertaintyRule::at(long i) const {
  if (i < 1) throw config_error("uncertainty index must be >= 1");
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::InverseIndex: return 1.0 / static_cast<double>(i);
    case Kind::Custom:
      if (static_cast<std::size_t>(i) > values.size())
        throw config_error("custom uncertainty sequence shorter than n");
      return values[static_cast<std::size_t>(i) - 1];
  }
  throw config_error("unknown uncertainty rule");
}

double UncertaintyRule::cesaro_mean(long n) const {
  if (n < 1) throw config_error("cesaro_mean needs n >= 1");
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::InverseIndex: {
      // harmonic number, summed small-to-large for accuracy
      long double h = 0.0L;
      for (long i = n; i >= 1; --i) h += 1.0L / static_cast<long double>(i);
      return static_cast<double>(h / static_cast<long double>(n));
    }
    case Kind::Custom: {
      if (static_cast<std::size_t>(n) > values.size())
        throw config_error("custom uncertainty sequence shorter than n");
      long double s = 0.0L;
      for (long i = 0; i < n; ++i) s += values[static_cast<std::size_t>(i)];
      return static_cast<double>(s / static_cast<long double>(n));
    }
  }
  throw config_error("unknown uncertainty rule");
}

TruncationRule TruncationRule::ceil_log2_times(double c) {
  TruncationRule r;
  r.kind = Kind::CeilLog2Times;
  r.c = c;
  return r;
}

TruncationRule TruncationRule::fixed(long q) {
  TruncationRule r;
  r.kind = Kind::Fixed;
  r.q = q;
  return r;
}

TruncationRule TruncationRule::full_path() {
  return fixed(std::numeric_limits<long>::max());
}

long TruncationRule::q_at(long n) const {
  if (n < 1) throw config_error("truncation needs n >= 1");
  switch (kind) {
    case Kind::CeilLog2Times: {
      if (!(c > 0.0)) throw config_error("truncation factor c must be > 0");
      if (n == 1) return 0;
      return static_cast<long>(std::ceil(c * std::log2(static_cast<double>(n))));
    }
    case Kind::Fixed:
      if (q < 0) throw config_error("fixed truncation q must be >= 0");
      return q;
  }
  throw config_error("unknown truncation rule");
}

void Ar1Config::validate() const {
  if (!(std::abs(rho) < 1.0)) throw config_error("rho must lie in (-1,1)");
  if (!(series_tolerance > 0.0))
    throw config_error("series_tolerance must be > 0");
  if (max_path_length < 1) throw config_error("max_path_length must be >= 1");
  innovation.validate();
  if (truncation_rule.kind == TruncationRule::Kind::CeilLog2Times &&
      !(truncation_rule.c > 0.0))
    throw config_error("truncation factor c must be > 0");
}

std::size_t burn_in_length(const Ar1Config& config) {
  const double a = std::abs(config.rho);
  if (a == 0.0) return 0;
  const double sigma = std::sqrt(config.innovation.variance());
  const double target = config.series_tolerance * std::sqrt(1.0 - a * a) / sigma;
  if (target >= 1.0) return 0;
  // |rho|^{J+1} < target, with a linear scan to absorb rounding
  double j_est = std::log(target) / std::log(a) - 1.0;
  if (!(j_est >= 0.0)) j_est = 0.0;
  const double cap = static_cast<double>(config.max_path_length) + 1.0;
  std::size_t j = static_cast<std::size_t>(std::min(j_est, cap));
  const auto l2_tail = [&](std::size_t jj) {
    return std::pow(a, static_cast<double>(jj + 1)) * sigma /
           std::sqrt(1.0 - a * a);
  };
  while (l2_tail(j) >= config.series_tolerance && j <= config.max_path_length)
    ++j;
  while (j > 0 && l2_tail(j - 1) < config.series_tolerance) --j;
  return j;
}

ProcessPairSample simulate_pair(const Ar1Config& config, long n, std::size_t M,
                                StreamKey key, unsigned workers) {
  config.validate();
  if (n < 1) throw config_error("simulate_pair needs n >= 1");
  if (M < 1) throw config_error("simulate_pair needs M >= 1");

  const std::size_t burn = burn_in_length(config);
  const std::size_t path_len = burn + static_cast<std::size_t>(n);
  if (path_len > config.max_path_length || burn > config.max_path_length)
    throw resource_error(
        "series tolerance requires a path longer than max_path_length (rho "
        "too close to 1)");

  const long q_raw = config.truncation_rule.q_at(n);
  const std::size_t q_keep = std::min(static_cast<std::size_t>(q_raw) + 1,
                                      path_len);  // innovations kept by Y
  const double ebar = config.uncertainty_rule.cesaro_mean(n);

  ProcessPairSample out;
  out.n = n;
  out.replications = M;
  out.x.resize(M);
  out.y.resize(M);
  out.x_obs_mean.resize(M);
  out.base_key = key;
  out.rho = config.rho;
  out.mu = config.mu;
  out.ebar = ebar;
  out.q_used = q_raw;

  const double rho = config.rho;
  const double mu = config.mu;
  const InnovationSpec spec = config.innovation;
  const double inv_n = 1.0 / static_cast<double>(n);

  parallel_for(M, workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> ring(q_keep);
    for (std::size_t m = lo; m < hi; ++m) {
      RandomStream stream(StreamKey{
          key.master_seed,
          static_cast<std::uint32_t>(key.replication_id + m),
          key.lane_id});
      double acc = 0.0;
      double xsum = 0.0;
      std::size_t rp = 0;
      for (std::size_t t = 0; t < path_len; ++t) {
        const double eps = sample_one(spec, stream);
        acc = rho * acc + eps;
        if (t >= burn) xsum += mu + acc;
        ring[rp] = eps;
        if (++rp == q_keep) rp = 0;
      }
      // Horner over the kept innovations, oldest first; when q_keep equals
      // the path length this replays the full recursion bit-for-bit.
      double tail_acc = 0.0;
      for (std::size_t k = 0; k < q_keep; ++k) {
        tail_acc = rho * tail_acc + ring[(rp + k) % q_keep];
      }
      const double xbar_obs = xsum * inv_n + ebar;
      out.x[m] = mu + acc;
      out.y[m] = xbar_obs + tail_acc;
      out.x_obs_mean[m] = xbar_obs;
    }
  });
  return out;
}

double tail_sum_probability_bound(double rho, double sigma2, long q,
                                  double eps) {
  if (!(std::abs(rho) < 1.0)) throw config_error("rho must lie in (-1,1)");
  if (!(sigma2 > 0.0)) throw config_error("sigma2 must be > 0");
  if (q < 0) throw config_error("q must be >= 0");
  if (!(eps > 0.0)) throw config_error("eps must be > 0");
  const double r2 = rho * rho;
  return sigma2 / (eps * eps) * std::pow(r2, static_cast<double>(q + 1)) /
         (1.0 - r2);
}

DecompositionCheck decomposition_bound(const Ar1Config& config, long n,
                                       const ProcessPairSample& sample) {
  config.validate();
  if (n < 1) throw config_error("decomposition_bound needs n >= 1");
  if (sample.n != n || sample.x.size() != sample.replications ||
      sample.y.size() != sample.replications ||
      sample.x_obs_mean.size() != sample.replications)
    throw config_error("sample does not match the requested n");
  const double ebar = config.uncertainty_rule.cesaro_mean(n);
  if (sample.rho != config.rho || sample.mu != config.mu ||
      sample.ebar != ebar || sample.q_used != config.truncation_rule.q_at(n))
    throw config_error("sample was not produced by this configuration");

  const std::size_t M = sample.replications;
  DecompositionCheck check;
  check.uncertainty_term.resize(M);
  check.mean_term.resize(M);
  check.tail_term.resize(M);
  check.holds.resize(M);
  check.all_hold = true;
  for (std::size_t m = 0; m < M; ++m) {
    const double xbar_n = sample.x_obs_mean[m] - ebar;
    const double a1 = std::abs(ebar);
    const double a2 = std::abs(xbar_n - config.mu);
    const double tail =
        (sample.x[m] - sample.y[m]) - (config.mu - sample.x_obs_mean[m]);
    const double a3 = std::abs(tail);
    const bool ok = std::abs(sample.x[m] - sample.y[m]) <=
                    a1 + a2 + a3 + config.series_tolerance;
    check.uncertainty_term[m] = a1;
    check.mean_term[m] = a2;
    check.tail_term[m] = a3;
    check.holds[m] = ok ? 1 : 0;
    if (!ok) check.all_hold = false;
  }
  return check;
}

}  // namespace mgap
