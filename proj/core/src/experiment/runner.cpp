#include "mgap/experiment/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "config_detail.hpp"
#include "mgap/ar1.hpp"
#include "mgap/errors.hpp"
#include "mgap/experiment/csv.hpp"
#include "mgap/experiment/svg.hpp"
#include "mgap/innovations.hpp"
#include "mgap/kriging.hpp"
#include "mgap/moment_gap.hpp"
#include "mgap/net.hpp"
#include "mgap/random_fields.hpp"
#include "mgap/rng.hpp"
#include "mgap/ui_diagnostics.hpp"
#include "mgap/version.hpp"

namespace mgap {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct OutputFile {
  std::string name;
  std::string content;
};

struct Outputs {
  bool plots = true;
  std::vector<OutputFile> files;

  void add(std::string name, std::string content) {
    files.push_back({std::move(name), std::move(content)});
  }
  void add_plot(const std::string& name, const PlotSpec& spec) {
    if (plots) add(name, render_line_plot_svg(spec));
  }
};

template <typename F>
void stage(const std::string& name, F&& f) {
  try {
    f();
  } catch (const config_error& e) {
    throw config_error(name + ": " + e.what());
  } catch (const resource_error& e) {
    throw resource_error(name + ": " + e.what());
  } catch (const fit_error& e) {
    throw fit_error(name + ": " + e.what());
  }
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json summary_head(const ExperimentConfig& config) {
  ordered_json s;
  s["schema_version"] = kConfigSchemaVersion;
  s["kind"] = config.kind;
  s["toolkit_version"] = kVersion;
  s["master_seed"] = config.master_seed;
  return s;
}

CsvCell cell(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

std::string multi_index_str(const std::vector<long>& n) {
  std::string out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(n[i]);
  }
  return out;
}

// ---------------------------------------------------------------- ar1_gap

void run_ar1_gap(const json& p, const ExperimentConfig& config, Outputs& out) {
  Ar1Config ar;
  ar.rho = p.at("rho").get<double>();
  ar.mu = p.value("mu", 0.0);
  ar.innovation = detail::innovation_from_json(p.at("innovation"));
  ar.uncertainty_rule = p.contains("uncertainty")
                            ? detail::uncertainty_from_json(p.at("uncertainty"))
                            : UncertaintyRule::inverse_index();
  ar.truncation_rule = p.contains("truncation")
                           ? detail::truncation_from_json(p.at("truncation"))
                           : TruncationRule::ceil_log2_times(2.0);
  ar.series_tolerance = p.value("series_tolerance", 1e-12);
  if (p.contains("max_path_length"))
    ar.max_path_length = p.at("max_path_length").get<std::size_t>();
  ar.validate();

  const auto n_grid = p.at("n_grid").get<std::vector<long>>();
  const auto M = p.at("replications").get<std::size_t>();
  const auto r_values = p.at("r_values").get<std::vector<double>>();

  const StreamKey key{config.master_seed, 0, 0};
  std::vector<ProcessPairSample> samples;
  for (const long n : n_grid)
    samples.push_back(simulate_pair(ar, n, M, key, config.workers));

  CsvTable table({"n", "r", "gap_lr", "gap_abs_moment", "gap_mean", "gap_norm",
                  "half_width", "M"});
  ordered_json results = ordered_json::array();
  for (const double r : r_values) {
    const MomentGapReport report = gap_report(samples, r);
    PlotSeries s_lr{"gap_lr", {}, {}};
    PlotSeries s_abs{"gap_abs_moment", {}, {}};
    PlotSeries s_norm{"gap_norm", {}, {}};
    PlotSeries s_mean{"gap_mean", {}, {}};
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const GapRow& row : report.rows) {
      table.add_row({static_cast<long long>(row.n), r, row.gap_lr,
                     row.gap_abs_moment, cell(row.gap_mean), row.gap_norm,
                     row.hw_lr, static_cast<long long>(row.replications)});
      decreasing = decreasing && row.gap_lr < prev;
      prev = row.gap_lr;
      const double n = static_cast<double>(row.n);
      s_lr.xs.push_back(n);
      s_lr.ys.push_back(row.gap_lr);
      s_abs.xs.push_back(n);
      s_abs.ys.push_back(row.gap_abs_moment);
      s_norm.xs.push_back(n);
      s_norm.ys.push_back(row.gap_norm);
      if (row.gap_mean) {
        s_mean.xs.push_back(n);
        s_mean.ys.push_back(*row.gap_mean);
      }
    }
    results.push_back({{"r", r},
                       {"final_gap_lr", report.rows.back().gap_lr},
                       {"strictly_decreasing_gap_lr", decreasing}});
    PlotSpec plot;
    plot.title = "Moment gaps vs n (r = " + format_double(r) + ")";
    plot.x_label = "n";
    plot.y_label = "gap";
    plot.log_x = true;
    plot.log_y = true;
    plot.series = {s_lr, s_abs, s_norm};
    if (!s_mean.xs.empty()) plot.series.push_back(s_mean);
    out.add_plot("gap_vs_n_r" + format_double(r) + ".svg", plot);
  }
  out.add("ar1_gap.csv", table.str());

  ordered_json summary = summary_head(config);
  summary["rho"] = ar.rho;
  summary["mu"] = ar.mu;
  summary["innovation"] = ar.innovation.family_name();
  summary["n_grid"] = n_grid;
  summary["r_values"] = r_values;
  summary["replications"] = M;
  summary["results"] = results;
  out.add("summary.json", summary.dump(2) + "\n");
}

// ---------------------------------------------------------- ui_diagnostic

void run_ui_diagnostic(const json& p, const ExperimentConfig& config,
                       Outputs& out) {
  const json& src = p.at("source");
  const std::string source_type = src.at("type").get<std::string>();
  const bool iid = source_type == "iid";
  InnovationSpec innov;
  if (iid) innov = detail::innovation_from_json(src.at("innovation"));

  const auto n_grid = p.at("n_grid").get<std::vector<long>>();
  const auto M = p.at("replications").get<std::size_t>();
  const double r = p.value("r", 1.0);
  const double delta = p.at("delta").get<double>();
  const double cap = p.at("cap").get<double>();

  std::vector<std::vector<double>> samples;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    RandomStream stream({config.master_seed, static_cast<std::uint32_t>(i), 0});
    std::vector<double> s(M);
    if (iid) {
      for (double& v : s) v = sample_one(innov, stream);
    } else {
      const double n = static_cast<double>(n_grid[i]);
      for (double& v : s) v = stream.uniform01() < 1.0 / n ? n : 0.0;
    }
    samples.push_back(std::move(s));
  }

  const std::vector<double> a_grid =
      p.contains("a_grid") ? p.at("a_grid").get<std::vector<double>>()
                           : default_a_grid(samples, r);
  const TailFunctionalCurve curve = tail_functional(samples, r, a_grid);
  const UiMomentReport moment = check_ui_sufficient(samples, delta, cap);

  CsvTable tail({"n", "a", "value", "half_width"});
  PlotSpec plot;
  plot.title = "Tail functional vs threshold (r = " + format_double(r) + ")";
  plot.x_label = "A";
  plot.y_label = "E[|X|^r 1(|X|^r > A)]";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    PlotSeries series{"n=" + std::to_string(n_grid[i]), {}, {}};
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
      tail.add_row({static_cast<long long>(n_grid[i]), a_grid[j],
                    curve.values[i][j], curve.half_widths[i][j]});
      series.xs.push_back(a_grid[j]);
      series.ys.push_back(curve.values[i][j]);
    }
    plot.series.push_back(std::move(series));
  }
  out.add("tail_functional.csv", tail.str());

  CsvTable mom({"n", "estimate", "half_width", "delta", "cap"});
  for (std::size_t i = 0; i < samples.size(); ++i)
    mom.add_row({static_cast<long long>(n_grid[i]), moment.estimates[i],
                 moment.half_widths[i], delta, cap});
  out.add("ui_moment.csv", mom.str());

  ordered_json summary = summary_head(config);
  summary["source"] = source_type;
  if (iid) summary["innovation"] = innov.family_name();
  summary["r"] = r;
  summary["delta"] = delta;
  summary["cap"] = cap;
  summary["replications"] = M;
  summary["max_moment_estimate"] = moment.max_estimate;
  summary["moment_check_pass"] = moment.pass;
  summary["ui_suspect"] = !moment.pass;
  out.add("summary.json", summary.dump(2) + "\n");

  out.add_plot("tail_functional_vs_a.svg", plot);
}

// ------------------------------------------------------------- ic_compare

std::vector<double> draw_sample_dist(const json& d, std::size_t size,
                                     RandomStream& stream) {
  const std::string type = d.at("type").get<std::string>();
  std::vector<double> out(size);
  if (type == "exponential") {
    const double rate = d.value("rate", 1.0);
    for (double& v : out) v = stream.exponential(rate);
  } else if (type == "uniform") {
    const double lo = d.at("lo").get<double>();
    const double hi = d.at("hi").get<double>();
    for (double& v : out) v = lo + (hi - lo) * stream.uniform01();
  } else if (type == "abs_innovation") {
    const InnovationSpec spec =
        detail::innovation_from_json(d.at("innovation"));
    for (double& v : out) v = std::abs(sample_one(spec, stream));
  } else {
    throw config_error("unknown sample distribution '" + type + "'");
  }
  return out;
}

void run_ic_compare(const json& p, const ExperimentConfig& config,
                    Outputs& out) {
  const auto size = p.at("size").get<std::size_t>();
  RandomStream stream1({config.master_seed, 0, 0});
  RandomStream stream2({config.master_seed, 1, 0});
  const std::vector<double> s1 = draw_sample_dist(p.at("sample1"), size, stream1);
  const std::vector<double> s2 = draw_sample_dist(p.at("sample2"), size, stream2);

  const std::vector<double> t_grid =
      p.contains("t_grid") ? p.at("t_grid").get<std::vector<double>>()
                           : default_t_grid(s1, s2);
  const IcComparison comp = ic_compare(s1, s2, t_grid);
  const SurvivorCurve c1 = integrated_survivor(s1, t_grid);
  const SurvivorCurve c2 = integrated_survivor(s2, t_grid);

  CsvTable table({"t", "h1", "hw1", "h2", "hw2", "margin", "slack"});
  PlotSeries h1{"H1", {}, {}}, h2{"H2", {}, {}};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    table.add_row({t_grid[i], comp.h1[i], c1.half_widths[i], comp.h2[i],
                   c2.half_widths[i], comp.margin[i], comp.slack[i]});
    h1.xs.push_back(t_grid[i]);
    h1.ys.push_back(comp.h1[i]);
    h2.xs.push_back(t_grid[i]);
    h2.ys.push_back(comp.h2[i]);
  }
  out.add("ic_curves.csv", table.str());

  double max_margin = -std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  for (const double m : comp.margin) {
    max_margin = std::max(max_margin, m);
    min_margin = std::min(min_margin, m);
  }
  ordered_json summary = summary_head(config);
  summary["size"] = size;
  summary["verdict"] = to_string(comp.verdict);
  summary["max_margin"] = max_margin;
  summary["min_margin"] = min_margin;
  summary["t_points"] = t_grid.size();
  out.add("summary.json", summary.dump(2) + "\n");

  PlotSpec plot;
  plot.title = "Integrated survivor curves";
  plot.x_label = "t";
  plot.y_label = "H(t)";
  plot.series = {h1, h2};
  out.add_plot("ic_h_curves.svg", plot);
}

// -------------------------------------------------- field experiments

FieldSpec field_spec_common(const json& p) {
  FieldSpec spec;
  spec.lambda_grid = p.at("lambda_grid").get<std::vector<long>>();
  spec.field_dim = p.at("field_dim").get<int>();
  spec.psi = detail::functional_from_json(p.at("psi"));
  spec.phi = detail::functional_from_json(p.at("phi"));
  spec.window = p.value("window", std::size_t{64});
  spec.xi_spec = detail::innovation_from_json(p.at("xi"));
  spec.tail_tolerance = p.value("tail_tolerance", 1e-8);
  return spec;
}

void run_field_gap(const json& p, const ExperimentConfig& config,
                   Outputs& out) {
  FieldSpec spec = field_spec_common(p);
  spec.n_grid = detail::n_grid_from_json(p.at("n_grid"), spec.field_dim);
  spec.validate();
  const auto M = p.at("replications").get<std::size_t>();
  const auto r_values = p.at("r_values").get<std::vector<double>>();

  const StreamKey key{config.master_seed, 0, 0};
  std::vector<FieldSample> samples;
  for (const auto& n : spec.n_grid)
    samples.push_back(simulate_field(spec, n, M, key, config.workers));

  CsvTable table({"n", "n_eff", "r", "sup_gap_lr", "argmax_lr",
                  "sup_gap_abs_moment", "argmax_abs_moment", "sup_gap_norm",
                  "argmax_norm", "sup_gap_mean", "argmax_mean", "half_width",
                  "M"});
  CsvTable detail_table({"n", "r", "lambda", "gap_lr", "gap_abs_moment",
                         "gap_mean", "gap_norm", "half_width"});
  ordered_json results = ordered_json::array();
  for (const double r : r_values) {
    const FieldGapReport report = field_gap_report(samples, r);
    PlotSeries series{"sup gap_lr", {}, {}};
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const FieldGapRow& row : report.rows) {
      table.add_row({multi_index_str(row.n),
                     static_cast<long long>(row.n_eff), r, row.sup_gap_lr,
                     static_cast<long long>(row.argmax_lr),
                     row.sup_gap_abs_moment,
                     static_cast<long long>(row.argmax_abs_moment),
                     row.sup_gap_norm, static_cast<long long>(row.argmax_norm),
                     cell(row.sup_gap_mean),
                     row.sup_gap_mean
                         ? CsvCell(static_cast<long long>(row.argmax_mean))
                         : CsvCell(std::monostate{}),
                     row.hw_lr, static_cast<long long>(row.replications)});
      decreasing = decreasing && row.sup_gap_lr < prev;
      prev = row.sup_gap_lr;
      series.xs.push_back(static_cast<double>(row.n_eff));
      series.ys.push_back(row.sup_gap_lr);
    }
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      for (std::size_t j = 0; j < report.lambda_grid.size(); ++j) {
        const GapRow& g = report.per_lambda[i][j];
        detail_table.add_row({multi_index_str(report.rows[i].n), r,
                              static_cast<long long>(report.lambda_grid[j]),
                              g.gap_lr, g.gap_abs_moment, cell(g.gap_mean),
                              g.gap_norm, g.hw_lr});
      }
    }
    results.push_back({{"r", r},
                       {"final_sup_gap_lr", report.rows.back().sup_gap_lr},
                       {"strictly_decreasing_sup_gap_lr", decreasing}});
    PlotSpec plot;
    plot.title = "Sup gap over the index set vs n (r = " + format_double(r) + ")";
    plot.x_label = "min component of n";
    plot.y_label = "sup gap_lr";
    plot.log_x = true;
    plot.log_y = true;
    plot.series = {series};
    out.add_plot("field_gap_vs_n_r" + format_double(r) + ".svg", plot);
  }
  out.add("field_gap.csv", table.str());
  out.add("field_gap_lambda.csv", detail_table.str());

  ordered_json summary = summary_head(config);
  summary["psi"] = spec.psi.name;
  summary["phi"] = spec.phi.name;
  summary["lambda_grid"] = spec.lambda_grid;
  summary["window"] = spec.window;
  summary["replications"] = M;
  summary["results"] = results;
  out.add("summary.json", summary.dump(2) + "\n");
}

void run_stationarity(const json& p, const ExperimentConfig& config,
                      Outputs& out) {
  FieldSpec spec = field_spec_common(p);
  const std::vector<long> n =
      detail::multi_index_from_json(p.at("n"), spec.field_dim);
  spec.n_grid = {n};
  spec.validate();
  const auto M = p.at("replications").get<std::size_t>();
  const double alpha = p.value("alpha", 0.01);

  const FieldSample sample =
      simulate_field(spec, n, M, {config.master_seed, 0, 0}, config.workers);

  std::vector<std::pair<long, long>> pairs;
  const json& pj = p.at("pairs");
  if (pj.is_string()) {
    for (std::size_t i = 0; i < spec.lambda_grid.size(); ++i)
      for (std::size_t j = i + 1; j < spec.lambda_grid.size(); ++j)
        pairs.emplace_back(spec.lambda_grid[i], spec.lambda_grid[j]);
  } else {
    for (const json& e : pj)
      pairs.emplace_back(e[0].get<long>(), e[1].get<long>());
  }

  const std::vector<StationarityPair> rows =
      check_marginal_stationarity(sample, pairs, alpha);

  CsvTable table({"lambda1", "lambda2", "ks_x", "ks_y", "ks_diff", "critical",
                  "consistent"});
  std::size_t consistent = 0;
  for (const StationarityPair& row : rows) {
    table.add_row({static_cast<long long>(row.lambda1),
                   static_cast<long long>(row.lambda2), row.ks_x, row.ks_y,
                   row.ks_diff, row.critical, row.consistent});
    consistent += row.consistent ? 1 : 0;
  }
  out.add("stationarity.csv", table.str());

  ordered_json summary = summary_head(config);
  summary["psi"] = spec.psi.name;
  summary["phi"] = spec.phi.name;
  summary["n"] = n;
  summary["alpha"] = alpha;
  summary["replications"] = M;
  summary["pairs"] = rows.size();
  summary["consistent_pairs"] = consistent;
  summary["consistent_fraction"] =
      rows.empty() ? 1.0
                   : static_cast<double>(consistent) /
                         static_cast<double>(rows.size());
  summary["all_consistent"] = consistent == rows.size();
  out.add("summary.json", summary.dump(2) + "\n");
}

// ------------------------------------------------------ net experiments

void run_net_theorem_c(const json& p, const ExperimentConfig& config,
                       Outputs& out) {
  NetModel net = detail::net_from_config_json(p.at("net"));
  net.validate();
  const json& pert = p.at("perturbation");
  Eigen::VectorXd direction;
  if (pert.at("direction").is_string()) {
    direction = Eigen::VectorXd::Ones(net.zeta_dim());
  } else {
    const auto v = pert.at("direction").get<std::vector<double>>();
    direction = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (pert.value("normalized", true)) {
    const double norm = direction.norm();
    if (!(norm > 0.0))
      throw config_error("perturbation direction has zero norm");
    direction /= norm;
  }
  const double magnitude = pert.value("magnitude", 1.0);
  const auto n_grid = p.at("n_grid").get<std::vector<long>>();
  const InputLaw law = detail::input_law_from_json(p.at("input_law"));
  const auto M = p.at("replications").get<std::size_t>();

  const Eigen::VectorXd zeta = net.zeta();
  std::vector<std::pair<long, Eigen::VectorXd>> estimates;
  for (const long n : n_grid)
    estimates.emplace_back(
        n, zeta + (magnitude / static_cast<double>(n)) * direction);

  const TheoremCGapReport report =
      theorem_c_gap(net, zeta, estimates, law, M, {config.master_seed, 0, 0});

  CsvTable table({"n", "zeta_dist", "max_gap", "mean_gap", "bound", "holds"});
  PlotSeries s_max{"max gap", {}, {}}, s_bound{"bound", {}, {}};
  bool all_hold = true;
  for (const TheoremCGapRow& row : report.rows) {
    table.add_row({static_cast<long long>(row.n), row.zeta_dist, row.max_gap,
                   row.mean_gap, row.bound, row.holds});
    all_hold = all_hold && row.holds;
    s_max.xs.push_back(static_cast<double>(row.n));
    s_max.ys.push_back(row.max_gap);
    s_bound.xs.push_back(static_cast<double>(row.n));
    s_bound.ys.push_back(row.bound);
  }
  out.add("theorem_c.csv", table.str());

  ordered_json summary = summary_head(config);
  summary["parameter_lipschitz"] = report.parameter_lipschitz;
  summary["input_lipschitz"] = net_lipschitz(net).input_lipschitz;
  summary["replications"] = report.replications;
  summary["all_hold"] = all_hold;
  out.add("summary.json", summary.dump(2) + "\n");

  PlotSpec plot;
  plot.title = "Last-layer perturbation gap vs n";
  plot.x_label = "n";
  plot.y_label = "gap";
  plot.log_x = true;
  plot.log_y = true;
  plot.series = {s_max, s_bound};
  out.add_plot("theorem_c_gap_vs_n.svg", plot);
}

void run_net_moment_bound(const json& p, const ExperimentConfig& config,
                          Outputs& out) {
  NetModel net = detail::net_from_config_json(p.at("net"));
  net.validate();
  const InputLaw law = detail::input_law_from_json(p.at("input_law"));
  const double delta = p.at("delta").get<double>();
  const auto M = p.at("replications").get<std::size_t>();

  std::optional<Eigen::VectorXd> x0;
  if (p.contains("x0") && !p.at("x0").is_null()) {
    if (p.at("x0").is_string()) {
      x0 = Eigen::VectorXd::Zero(net.input_dim());
    } else {
      const auto v = p.at("x0").get<std::vector<double>>();
      x0 = Eigen::Map<const Eigen::VectorXd>(
          v.data(), static_cast<Eigen::Index>(v.size()));
    }
  }

  const MomentBoundCheck check = net_moment_bound_check(
      net, law, delta, x0, M, {config.master_seed, 0, 0});

  CsvTable table({"delta", "M", "empirical", "empirical_half_width",
                  "bound_available", "bound", "bound_linear", "holds",
                  "holds_linear"});
  table.add_row({check.delta, static_cast<long long>(check.replications),
                 check.empirical, check.empirical_hw, check.bound_available,
                 check.bound, check.bound_linear, check.holds,
                 check.holds_linear});
  out.add("net_moment_bound.csv", table.str());

  ordered_json summary = summary_head(config);
  summary["delta"] = check.delta;
  summary["replications"] = check.replications;
  summary["empirical"] = check.empirical;
  summary["bound_available"] = check.bound_available;
  summary["bound"] = check.bound;
  summary["bound_linear"] = check.bound_linear;
  summary["holds"] = check.holds;
  summary["holds_linear"] = check.holds_linear;
  out.add("summary.json", summary.dump(2) + "\n");
}

// ------------------------------------------------------------ kriging_gap

void run_kriging_gap(const json& p, const ExperimentConfig& config,
                     Outputs& out) {
  const TrueFunctionRef fn =
      detail::true_function_from_json(p.at("true_function"));
  const double lo = p.at("domain").at("lo").get<double>();
  const double hi = p.at("domain").at("hi").get<double>();
  const auto design_sizes = p.at("design_sizes").get<std::vector<long>>();
  KrigingConfig kc;
  kc.lengthscales = {p.at("lengthscale").get<double>()};
  kc.basis_degree = p.value("basis_degree", 0);
  kc.nugget = p.value("nugget", 1e-10);

  std::vector<double> test_points;
  const json& tp = p.at("test_points");
  if (tp.at("type").get<std::string>() == "grid") {
    const long count = tp.at("count").get<long>();
    if (count == 1) {
      test_points.push_back(0.5 * (lo + hi));
    } else {
      for (long i = 0; i < count; ++i)
        test_points.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(count - 1));
    }
  } else {
    test_points = tp.at("points").get<std::vector<double>>();
  }
  const auto M = p.at("replications").get<std::size_t>();
  const auto r_values = p.at("r_values").get<std::vector<double>>();

  const KrigingPairSamples res = kriging_surrogate_pair(
      fn, lo, hi, design_sizes, kc, test_points, M, {config.master_seed, 0, 0});

  CsvTable table({"design_size", "r", "gap_lr", "gap_abs_moment", "gap_mean",
                  "gap_norm", "half_width", "M"});
  ordered_json results = ordered_json::array();
  for (const double r : r_values) {
    const MomentGapReport report = gap_report(res.pairs, r);
    PlotSeries series{"gap_lr", {}, {}};
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const GapRow& row : report.rows) {
      table.add_row({static_cast<long long>(row.n), r, row.gap_lr,
                     row.gap_abs_moment, cell(row.gap_mean), row.gap_norm,
                     row.hw_lr, static_cast<long long>(row.replications)});
      decreasing = decreasing && row.gap_lr < prev;
      prev = row.gap_lr;
      series.xs.push_back(static_cast<double>(row.n));
      series.ys.push_back(row.gap_lr);
    }
    results.push_back({{"r", r},
                       {"final_gap_lr", report.rows.back().gap_lr},
                       {"strictly_decreasing_gap_lr", decreasing}});
    PlotSpec plot;
    plot.title = "Surrogate gap vs design size (r = " + format_double(r) + ")";
    plot.x_label = "design size";
    plot.y_label = "gap_lr";
    plot.log_x = true;
    plot.log_y = true;
    plot.series = {series};
    out.add_plot("kriging_gap_vs_design_r" + format_double(r) + ".svg", plot);
  }
  out.add("kriging_gap.csv", table.str());

  CsvTable design({"design_size", "max_design_error", "max_design_sd",
                   "max_test_sd", "mean_abs_mean_gap"});
  double worst_design_error = 0.0;
  for (const KrigingDesignCheck& check : res.checks) {
    design.add_row({static_cast<long long>(check.design_size),
                    check.max_design_error, check.max_design_sd,
                    check.max_test_sd, check.mean_abs_mean_gap});
    worst_design_error = std::max(worst_design_error, check.max_design_error);
  }
  out.add("kriging_design.csv", design.str());

  ordered_json summary = summary_head(config);
  summary["true_function"] = fn.name;
  summary["design_sizes"] = design_sizes;
  summary["lengthscale"] = kc.lengthscales[0];
  summary["basis_degree"] = kc.basis_degree;
  summary["nugget"] = kc.nugget;
  summary["replications"] = M;
  summary["max_design_error"] = worst_design_error;
  summary["warnings"] = res.warnings;
  summary["results"] = results;
  out.add("summary.json", summary.dump(2) + "\n");
}

// ------------------------------------------------------ inequality_suite

void run_inequality_suite(const json& p, const ExperimentConfig& config,
                          Outputs& out) {
  const auto P = p.value("pairs", std::size_t{1000000});
  const std::vector<std::string> families = p.value(
      "families",
      std::vector<std::string>{"gaussian", "student_t", "centered_exponential",
                               "scaled_uniform", "spike"});
  const long spike_n = p.value("spike_n", 100L);
  const auto r_pointwise =
      p.value("r_pointwise", std::vector<double>{0.7, 1.0});
  const auto r_cr = p.value("r_cr", std::vector<double>{0.7, 2.0});
  const auto r_minkowski = p.value("r_minkowski", std::vector<double>{2.0});

  CsvTable table({"family", "check", "r", "pairs", "violations"});
  long long total = 0;
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const std::string& family = families[fi];
    RandomStream stream(
        {config.master_seed, static_cast<std::uint32_t>(fi), 0});
    std::vector<double> x(P), y(P);
    if (family == "spike") {
      const double n = static_cast<double>(spike_n);
      for (std::size_t i = 0; i < P; ++i) {
        x[i] = stream.uniform01() < 1.0 / n ? n : 0.0;
        y[i] = stream.uniform01() < 1.0 / n ? n : 0.0;
      }
    } else {
      InnovationSpec spec;
      if (family == "gaussian") spec = InnovationSpec::gaussian(1.0);
      else if (family == "student_t") spec = InnovationSpec::student_t(5.0);
      else if (family == "centered_exponential")
        spec = InnovationSpec::centered_exponential(1.0);
      else spec = InnovationSpec::scaled_uniform(1.0);
      for (std::size_t i = 0; i < P; ++i) {
        x[i] = sample_one(spec, stream);
        y[i] = sample_one(spec, stream);
      }
    }
    for (const double r : r_pointwise) {
      const auto violations =
          static_cast<long long>(verify_pointwise_inequalities(x, y, r));
      table.add_row({family, std::string("pointwise_abs_power"), r,
                     static_cast<long long>(P), violations});
      total += violations;
    }
    for (const double r : r_cr) {
      const auto violations =
          static_cast<long long>(verify_cr_inequality(x, y, r));
      table.add_row({family, std::string("cr"), r, static_cast<long long>(P),
                     violations});
      total += violations;
    }
    for (const double r : r_minkowski) {
      const MinkowskiCheck check = verify_minkowski_gap(x, y, r);
      const long long violations = check.holds ? 0 : 1;
      table.add_row({family, std::string("minkowski"), r,
                     static_cast<long long>(P), violations});
      total += violations;
    }
  }
  out.add("inequality_suite.csv", table.str());

  ordered_json summary = summary_head(config);
  summary["pairs"] = P;
  summary["families"] = families;
  summary["total_violations"] = total;
  summary["all_zero"] = total == 0;
  out.add("summary.json", summary.dump(2) + "\n");
}

void compute(const ExperimentConfig& config, const json& params,
             Outputs& out) {
  const std::string& kind = config.kind;
  if (kind == "ar1_gap") return run_ar1_gap(params, config, out);
  if (kind == "ui_diagnostic") return run_ui_diagnostic(params, config, out);
  if (kind == "ic_compare") return run_ic_compare(params, config, out);
  if (kind == "field_gap") return run_field_gap(params, config, out);
  if (kind == "stationarity_check")
    return run_stationarity(params, config, out);
  if (kind == "net_theorem_c") return run_net_theorem_c(params, config, out);
  if (kind == "net_moment_bound")
    return run_net_moment_bound(params, config, out);
  if (kind == "kriging_gap") return run_kriging_gap(params, config, out);
  if (kind == "inequality_suite")
    return run_inequality_suite(params, config, out);
  throw config_error("unknown experiment kind '" + kind + "'");
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
  if (config.output_dir.empty())
    throw config_error(
        "output directory is empty; set output_dir or pass --out");
  const json params = json::parse(config.params_text);

  Outputs out;
  out.plots = config.plots;
  stage(config.kind + "/compute", [&] { compute(config, params, out); });

  RunManifest manifest;
  manifest.kind = config.kind;
  manifest.version = kVersion;
  manifest.config_digest = config.digest();
  manifest.seed = config.master_seed;
  manifest.workers = config.workers;

  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::vector<fs::path> written;
  try {
    stage("write", [&] {
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec)
        throw resource_error("cannot create directory " + dir.string() + ": " +
                             ec.message());
      for (const OutputFile& f : out.files) {
        const fs::path path = dir / f.name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw resource_error("cannot open " + path.string());
        os << f.content;
        os.flush();
        if (!os) throw resource_error("write failed for " + path.string());
        written.push_back(path);
        manifest.files.push_back(
            {f.name, f.content.size(), hex16(fnv1a64(f.content))});
      }
      manifest.created_utc = utc_now();
      const fs::path mpath = dir / "manifest.json";
      std::ofstream os(mpath, std::ios::binary | std::ios::trunc);
      if (!os) throw resource_error("cannot open " + mpath.string());
      os << manifest.to_json_text();
      os.flush();
      if (!os) throw resource_error("write failed for " + mpath.string());
    });
  } catch (...) {
    for (const fs::path& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
  return manifest;
}

}  // namespace mgap
