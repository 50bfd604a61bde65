#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mgap/innovations.hpp"
#include "mgap/rng.hpp"

namespace mgap {

// Deterministic observation offsets e_i added to the true process. Only the
// Cesaro mean of the sequence matters for the surrogate, so rules are named
// by how that mean behaves.
struct UncertaintyRule {
  enum class Kind { Zero, InverseIndex, Custom };
  Kind kind = Kind::InverseIndex;
  std::vector<double> values;  // Custom only, e_i = values[i-1]

  static UncertaintyRule zero();
  static UncertaintyRule inverse_index();
  static UncertaintyRule custom(std::vector<double> values);

  double at(long i) const;              // e_i, i >= 1
  double cesaro_mean(long n) const;     // (1/n) sum_{i<=n} e_i
};

// Surrogate filter cutoff q_n.
struct TruncationRule {
  enum class Kind { CeilLog2Times, Fixed };
  Kind kind = Kind::CeilLog2Times;
  double c = 2.0;   // CeilLog2Times: q_n = ceil(c * log2(n))
  long q = 0;       // Fixed

  static TruncationRule ceil_log2_times(double c = 2.0);
  static TruncationRule fixed(long q);
  // Fixed cutoff so large the surrogate keeps every simulated innovation.
  static TruncationRule full_path();

  long q_at(long n) const;
};

struct Ar1Config {
  double rho = 0.5;
  double mu = 0.0;
  InnovationSpec innovation;
  UncertaintyRule uncertainty_rule;
  TruncationRule truncation_rule;
  double series_tolerance = 1e-12;
  std::size_t max_path_length = std::size_t{1} << 25;

  void validate() const;
};

// Smallest J with |rho|^{J+1} * sigma / sqrt(1 - rho^2) below the series
// tolerance; the simulated path carries J burn-in innovations so the
// discarded infinite past has L2 norm under the tolerance.
std::size_t burn_in_length(const Ar1Config& config);

// Coupled draws of the true process X_n and the surrogate Y_n. Per
// replication both values come from one innovation path; base_key plus the
// replication index addresses that path, so the sample is reproducible
// bit-for-bit.
struct ProcessPairSample {
  long n = 0;
  std::size_t replications = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> x_obs_mean;
  StreamKey base_key;
  // fingerprint of the generating configuration, used to reject
  // mismatched config/sample pairs downstream
  double rho = 0.0;
  double mu = 0.0;
  double ebar = 0.0;
  long q_used = 0;
};

ProcessPairSample simulate_pair(const Ar1Config& config, long n, std::size_t M,
                                StreamKey key, unsigned workers = 1);

// Closed form of the Chebyshev bound on the truncated-tail event:
// (sigma2 / eps^2) * rho^{2(q+1)} / (1 - rho^2).
double tail_sum_probability_bound(double rho, double sigma2, long q, double eps);

// Per-replication split |x - y| <= |ebar| + |xbar_n - mu| + |tail|.
struct DecompositionCheck {
  std::vector<double> uncertainty_term;
  std::vector<double> mean_term;
  std::vector<double> tail_term;
  std::vector<unsigned char> holds;
  bool all_hold = false;
};

DecompositionCheck decomposition_bound(const Ar1Config& config, long n,
                                       const ProcessPairSample& sample);

}  // namespace mgap
