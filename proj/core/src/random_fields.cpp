#include "mgap/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "mgap/errors.hpp"
#include "mgap/parallel.hpp"
#include "mgap/stats.hpp"

namespace mgap {
namespace {

double eval_constant(std::span<const double>, std::span<const double> p, long,
                     long) {
  return p[0];
}

double horner_filter(std::span<const double> window, double rho, double mu) {
  double acc = 0.0;
  for (const double xi : window) acc = rho * acc + xi;
  return mu + acc;
}

double eval_ar1_window(std::span<const double> window,
                       std::span<const double> p, long, long) {
  return horner_filter(window, p[0], p[1]);
}

long trunc_q(double c, long n_eff) {
  if (n_eff <= 1) return 0;
  return static_cast<long>(std::ceil(c * std::log2(static_cast<double>(n_eff))));
}

double eval_ar1_window_trunc(std::span<const double> window,
                             std::span<const double> p, long n_eff, long) {
  const std::size_t keep = std::min<std::size_t>(
      static_cast<std::size_t>(trunc_q(p[2], n_eff)) + 1, window.size());
  return horner_filter(window.subspan(window.size() - keep, keep), p[0], p[1]);
}

double eval_clipped_poly(std::span<const double> window,
                         std::span<const double> p, long, long) {
  const double x = window.back();
  const double v = p[0] + p[1] * x + p[2] * x * x;
  return std::clamp(v, -p[3], p[3]);
}

double eval_lambda_probe(std::span<const double>, std::span<const double>,
                         long, long lambda) {
  return static_cast<double>(lambda);
}

double tail_zero(std::span<const double>, std::size_t, double) { return 0.0; }

double tail_geometric(std::span<const double> p, std::size_t window,
                      double xi_sd) {
  const double a = std::abs(p[0]);
  return std::pow(a, static_cast<double>(window)) * xi_sd /
         std::sqrt(1.0 - a * a);
}

double lip_zero(std::span<const double>) { return 0.0; }

double lip_filter_l1(std::span<const double> p) {
  // limit of sum_j |rho|^j over the infinite window
  return 1.0 / (1.0 - std::abs(p[0]));
}

// Global Lipschitz constant of clamp(a0 + a1 x + a2 x^2, +-clip): the slope
// is zero on clipped stretches, so the max |derivative| sits where the
// polynomial meets +-clip.
double lip_clipped_poly(std::span<const double> p) {
  const double a1 = p[1], a2 = p[2], clip = p[3], a0 = p[0];
  if (a2 == 0.0) return std::abs(a1);
  double best = 0.0;
  for (const double level : {clip, -clip}) {
    const double disc = a1 * a1 - 4.0 * a2 * (a0 - level);
    if (disc < 0.0) continue;
    const double s = std::sqrt(disc);
    for (const double root : {(-a1 + s) / (2.0 * a2), (-a1 - s) / (2.0 * a2)})
      best = std::max(best, std::abs(a1 + 2.0 * a2 * root));
  }
  return best;
}

void validate_functional(const CausalFunctional& fn,
                         std::span<const double> params) {
  if (params.size() != fn.param_count)
    throw config_error("functional '" + fn.name + "' expects " +
                       std::to_string(fn.param_count) + " parameters");
  if (fn.name == "ar1_window" || fn.name == "ar1_window_trunc") {
    if (!(std::abs(params[0]) < 1.0))
      throw config_error("functional '" + fn.name + "': rho must lie in (-1,1)");
  }
  if (fn.name == "ar1_window_trunc" && !(params[2] > 0.0))
    throw config_error("functional 'ar1_window_trunc': c must be > 0");
  if (fn.name == "clipped_poly" && !(params[3] > 0.0))
    throw config_error("functional 'clipped_poly': clip must be > 0");
}

}  // namespace

const std::vector<CausalFunctional>& functional_registry() {
  static const std::vector<CausalFunctional> registry = {
      {"constant", 1, 1, true, "c", eval_constant, tail_zero, lip_zero},
      {"ar1_window", 2, 1, true, "rho,mu", eval_ar1_window, tail_geometric,
       lip_filter_l1},
      {"ar1_window_trunc", 3, 1, true, "rho,mu,c", eval_ar1_window_trunc,
       tail_geometric, lip_filter_l1},
      {"clipped_poly", 4, 1, true, "a0,a1,a2,clip", eval_clipped_poly,
       tail_zero, lip_clipped_poly},
      {"lambda_probe", 0, 1, false, "", eval_lambda_probe, tail_zero,
       lip_zero},
  };
  return registry;
}

const CausalFunctional& find_functional(const std::string& name) {
  for (const CausalFunctional& fn : functional_registry())
    if (fn.name == name) return fn;
  throw config_error("unknown functional '" + name + "'");
}

long effective_index(const std::vector<long>& n) {
  if (n.empty()) throw config_error("empty multi-index");
  return *std::min_element(n.begin(), n.end());
}

void FieldSpec::validate() const {
  if (lambda_grid.empty()) throw config_error("lambda_grid is empty");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw config_error("lambda_grid must be strictly increasing");
  if (field_dim != 1 && field_dim != 2)
    throw config_error("field_dim must be 1 or 2");
  if (n_grid.empty()) throw config_error("n_grid is empty");
  for (const auto& n : n_grid) {
    if (static_cast<int>(n.size()) != field_dim)
      throw config_error("n_grid entry has wrong dimension");
    for (const long v : n)
      if (v < 1) throw config_error("n_grid components must be >= 1");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    bool some_larger = false;
    for (int k = 0; k < field_dim; ++k) {
      if (n_grid[i][k] < n_grid[i - 1][k])
        throw config_error("n_grid must be componentwise non-decreasing");
      if (n_grid[i][k] > n_grid[i - 1][k]) some_larger = true;
    }
    if (!some_larger) throw config_error("n_grid entries must be distinct");
  }
  if (window < 1) throw config_error("window must be >= 1");
  if (!(tail_tolerance > 0.0)) throw config_error("tail_tolerance must be > 0");
  xi_spec.validate();

  const double xi_sd = std::sqrt(xi_spec.variance());
  for (const FunctionalRef* ref : {&psi, &phi}) {
    const CausalFunctional& fn = find_functional(ref->name);
    validate_functional(fn, ref->params);
    if (window < fn.min_window)
      throw config_error("window too short for functional '" + fn.name + "'");
    if (fn.tail_error(ref->params, window, xi_sd) > tail_tolerance)
      throw config_error("functional '" + fn.name +
                         "' declared tail error exceeds tail_tolerance at "
                         "this window length");
  }
}

bool same_field_spec(const FieldSpec& a, const FieldSpec& b) {
  return a.lambda_grid == b.lambda_grid && a.field_dim == b.field_dim &&
         a.psi.name == b.psi.name && a.psi.params == b.psi.params &&
         a.phi.name == b.phi.name && a.phi.params == b.phi.params &&
         a.window == b.window && a.tail_tolerance == b.tail_tolerance &&
         a.xi_spec.family == b.xi_spec.family &&
         a.xi_spec.sigma2 == b.xi_spec.sigma2 && a.xi_spec.nu == b.xi_spec.nu &&
         a.xi_spec.rate == b.xi_spec.rate &&
         a.xi_spec.half_width == b.xi_spec.half_width;
}

FieldSample simulate_field(const FieldSpec& spec, const std::vector<long>& n,
                           std::size_t M, StreamKey key, unsigned workers) {
  spec.validate();
  if (static_cast<int>(n.size()) != spec.field_dim)
    throw config_error("multi-index dimension mismatch");
  for (const long v : n)
    if (v < 1) throw config_error("multi-index components must be >= 1");
  if (M < 1) throw config_error("simulate_field needs M >= 1");

  const CausalFunctional& psi = find_functional(spec.psi.name);
  const CausalFunctional& phi = find_functional(spec.phi.name);
  const long n_eff = effective_index(n);
  const long lo = spec.lambda_grid.front();
  const long hi = spec.lambda_grid.back();
  const std::size_t W = spec.window;
  // path covers lo - W .. hi
  const std::size_t path_len = W + 1 + static_cast<std::size_t>(hi - lo);
  const std::size_t L = spec.lambda_grid.size();

  FieldSample out;
  out.spec = spec;
  out.n = n;
  out.replications = M;
  out.x_field.resize(M * L);
  out.y_field.resize(M * L);
  out.base_key = key;

  parallel_for(M, workers, [&](std::size_t lo_m, std::size_t hi_m) {
    std::vector<double> path(path_len);
    for (std::size_t m = lo_m; m < hi_m; ++m) {
      RandomStream stream(StreamKey{
          key.master_seed, static_cast<std::uint32_t>(key.replication_id + m),
          key.lane_id});
      for (double& v : path) v = sample_one(spec.xi_spec, stream);
      for (std::size_t li = 0; li < L; ++li) {
        const long lambda = spec.lambda_grid[li];
        const std::span<const double> window(
            path.data() + (lambda - lo + 1), W);
        out.x_field[m * L + li] =
            psi.eval(window, spec.psi.params, n_eff, lambda);
        out.y_field[m * L + li] =
            phi.eval(window, spec.phi.params, n_eff, lambda);
      }
    }
  });
  return out;
}

std::vector<double> sup_gap(const FieldSample& sample) {
  const std::size_t L = sample.spec.lambda_grid.size();
  std::vector<double> sup(sample.replications, 0.0);
  for (std::size_t m = 0; m < sample.replications; ++m) {
    double best = 0.0;
    for (std::size_t li = 0; li < L; ++li)
      best = std::max(best, std::abs(sample.x_at(m, li) - sample.y_at(m, li)));
    sup[m] = best;
  }
  return sup;
}

FieldGapReport field_gap_report(const std::vector<FieldSample>& samples,
                                double r) {
  if (samples.empty()) throw config_error("field_gap_report needs samples");
  if (!(r > 0.0)) throw config_error("r must be > 0");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!same_field_spec(samples[i].spec, samples[0].spec))
      throw config_error("samples come from different field specs");

  const std::vector<long>& grid = samples[0].spec.lambda_grid;
  const std::size_t L = grid.size();

  FieldGapReport report;
  report.r = r;
  report.lambda_grid = grid;

  for (const FieldSample& sample : samples) {
    const std::size_t M = sample.replications;
    std::vector<GapRow> lambda_rows;
    lambda_rows.reserve(L);
    std::vector<double> x_col(M), y_col(M);
    for (std::size_t li = 0; li < L; ++li) {
      for (std::size_t m = 0; m < M; ++m) {
        x_col[m] = sample.x_at(m, li);
        y_col[m] = sample.y_at(m, li);
      }
      lambda_rows.push_back(gap_row(effective_index(sample.n), x_col, y_col, r));
    }

    FieldGapRow row;
    row.n = sample.n;
    row.n_eff = effective_index(sample.n);
    row.replications = M;
    std::size_t best_lr = 0, best_abs = 0, best_norm = 0, best_mean = 0;
    for (std::size_t li = 1; li < L; ++li) {
      if (lambda_rows[li].gap_lr > lambda_rows[best_lr].gap_lr) best_lr = li;
      if (lambda_rows[li].gap_abs_moment >
          lambda_rows[best_abs].gap_abs_moment)
        best_abs = li;
      if (lambda_rows[li].gap_norm > lambda_rows[best_norm].gap_norm)
        best_norm = li;
      if (lambda_rows[li].gap_mean.has_value() &&
          *lambda_rows[li].gap_mean > *lambda_rows[best_mean].gap_mean)
        best_mean = li;
    }
    row.sup_gap_lr = lambda_rows[best_lr].gap_lr;
    row.sup_gap_abs_moment = lambda_rows[best_abs].gap_abs_moment;
    row.sup_gap_norm = lambda_rows[best_norm].gap_norm;
    row.argmax_lr = grid[best_lr];
    row.argmax_abs_moment = grid[best_abs];
    row.argmax_norm = grid[best_norm];
    row.hw_lr = lambda_rows[best_lr].hw_lr;
    if (lambda_rows[best_mean].gap_mean.has_value()) {
      row.sup_gap_mean = *lambda_rows[best_mean].gap_mean;
      row.argmax_mean = grid[best_mean];
    }
    report.rows.push_back(std::move(row));
    report.per_lambda.push_back(std::move(lambda_rows));
  }
  return report;
}

std::vector<StationarityPair> check_marginal_stationarity(
    const FieldSample& sample,
    const std::vector<std::pair<long, long>>& lambda_pairs, double alpha) {
  const std::vector<long>& grid = sample.spec.lambda_grid;
  const std::size_t M = sample.replications;
  const auto index_of = [&](long lambda) -> std::size_t {
    const auto it = std::find(grid.begin(), grid.end(), lambda);
    if (it == grid.end())
      throw config_error("lambda " + std::to_string(lambda) +
                         " is not in the grid");
    return static_cast<std::size_t>(it - grid.begin());
  };

  std::vector<StationarityPair> out;
  out.reserve(lambda_pairs.size());
  std::vector<double> x1(M), y1(M), d1(M), x2(M), y2(M), d2(M);
  for (const auto& [la, lb] : lambda_pairs) {
    const std::size_t ia = index_of(la);
    const std::size_t ib = index_of(lb);
    for (std::size_t m = 0; m < M; ++m) {
      x1[m] = sample.x_at(m, ia);
      y1[m] = sample.y_at(m, ia);
      d1[m] = x1[m] - y1[m];
      x2[m] = sample.x_at(m, ib);
      y2[m] = sample.y_at(m, ib);
      d2[m] = x2[m] - y2[m];
    }
    StationarityPair pair;
    pair.lambda1 = la;
    pair.lambda2 = lb;
    pair.ks_x = two_sample_ks_statistic(x1, x2);
    pair.ks_y = two_sample_ks_statistic(y1, y2);
    pair.ks_diff = two_sample_ks_statistic(d1, d2);
    pair.critical = ks_two_sample_critical(M, M, alpha);
    pair.consistent = pair.ks_x < pair.critical && pair.ks_y < pair.critical &&
                      pair.ks_diff < pair.critical;
    out.push_back(pair);
  }
  return out;
}

}  // namespace mgap
