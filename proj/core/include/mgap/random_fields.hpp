#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mgap/innovations.hpp"
#include "mgap/moment_gap.hpp"
#include "mgap/rng.hpp"

namespace mgap {

// A named map from a finite window of i.i.d. inputs to a real value.
// Windows are chronological and end at xi_lambda. n_eff is the smallest
// component of the sequence multi-index, which is what window truncations
// may depend on. Entries declare the L2 error of cutting the infinite past
// at the window length plus a Lipschitz constant with respect to the
// window entries, so downstream bounds have the data they need.
struct CausalFunctional {
  std::string name;
  std::size_t param_count = 0;
  std::size_t min_window = 1;
  bool lambda_invariant = true;
  std::string param_names;  // comma-separated, for the catalog listing
  double (*eval)(std::span<const double> window, std::span<const double> params,
                 long n_eff, long lambda) = nullptr;
  double (*tail_error)(std::span<const double> params, std::size_t window,
                       double xi_sd) = nullptr;
  double (*lipschitz)(std::span<const double> params) = nullptr;
};

// Built-in catalog: constant, ar1_window, ar1_window_trunc, clipped_poly,
// lambda_probe. Order is fixed.
const std::vector<CausalFunctional>& functional_registry();
const CausalFunctional& find_functional(const std::string& name);

struct FunctionalRef {
  std::string name;
  std::vector<double> params;
};

struct FieldSpec {
  std::vector<long> lambda_grid;           // strictly increasing
  int field_dim = 1;                       // 1 or 2
  std::vector<std::vector<long>> n_grid;   // multi-indices, field_dim each
  FunctionalRef psi;
  FunctionalRef phi;
  std::size_t window = 64;
  InnovationSpec xi_spec;
  double tail_tolerance = 1e-8;

  void validate() const;
};

bool same_field_spec(const FieldSpec& a, const FieldSpec& b);

long effective_index(const std::vector<long>& n);  // min component

// Coupled field draws: row m holds X(lambda) and Y(lambda) for every
// lambda in the grid, both evaluated on replication m's xi path.
struct FieldSample {
  FieldSpec spec;
  std::vector<long> n;
  std::size_t replications = 0;
  std::vector<double> x_field;  // M x |Lambda|, row-major
  std::vector<double> y_field;
  StreamKey base_key;

  double x_at(std::size_t m, std::size_t lambda_index) const {
    return x_field[m * spec.lambda_grid.size() + lambda_index];
  }
  double y_at(std::size_t m, std::size_t lambda_index) const {
    return y_field[m * spec.lambda_grid.size() + lambda_index];
  }
};

FieldSample simulate_field(const FieldSpec& spec, const std::vector<long>& n,
                           std::size_t M, StreamKey key, unsigned workers = 1);

// Per replication, max over lambda of |x - y|.
std::vector<double> sup_gap(const FieldSample& sample);

struct FieldGapRow {
  std::vector<long> n;
  long n_eff = 0;
  std::size_t replications = 0;
  double sup_gap_lr = 0.0;
  double sup_gap_abs_moment = 0.0;
  double sup_gap_norm = 0.0;
  std::optional<double> sup_gap_mean;
  long argmax_lr = 0;
  long argmax_abs_moment = 0;
  long argmax_norm = 0;
  long argmax_mean = 0;
  double hw_lr = 0.0;  // half-width of gap_lr at its arg-max lambda
};

struct FieldGapReport {
  double r = 1.0;
  std::vector<long> lambda_grid;
  std::vector<FieldGapRow> rows;
  std::vector<std::vector<GapRow>> per_lambda;  // [n index][lambda index]
};

FieldGapReport field_gap_report(const std::vector<FieldSample>& samples,
                                double r);

// Necessary-condition check of equality in distribution across lambda:
// KS statistics on the three projections x, y and x - y.
struct StationarityPair {
  long lambda1 = 0;
  long lambda2 = 0;
  double ks_x = 0.0;
  double ks_y = 0.0;
  double ks_diff = 0.0;
  double critical = 0.0;
  bool consistent = false;
};

std::vector<StationarityPair> check_marginal_stationarity(
    const FieldSample& sample,
    const std::vector<std::pair<long, long>>& lambda_pairs,
    double alpha = 0.01);

}  // namespace mgap
