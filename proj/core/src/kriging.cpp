#include "mgap/kriging.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mgap/errors.hpp"

namespace mgap {
namespace {

using nlohmann::json;

void append_exponents(int dim, int degree_left, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dim) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= degree_left; ++e) {
    current.push_back(e);
    append_exponents(dim, degree_left - e, current, out);
    current.pop_back();
  }
}

}  // namespace

void KrigingConfig::validate(int dim) const {
  if (dim < 1) throw config_error("kriging needs dimension >= 1");
  if (static_cast<int>(lengthscales.size()) != dim)
    throw config_error("lengthscales must have one entry per dimension");
  for (const double l : lengthscales)
    if (!(l > 0.0)) throw config_error("lengthscales must be > 0");
  if (basis_degree < 0) throw config_error("basis_degree must be >= 0");
  if (!(nugget >= 0.0)) throw config_error("nugget must be >= 0");
}

std::vector<std::vector<int>> polynomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  append_exponents(dim, degree, current, out);
  // graded order: total degree, then lexicographic
  std::stable_sort(out.begin(), out.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int sa = 0, sb = 0;
                     for (int v : a) sa += v;
                     for (int v : b) sb += v;
                     if (sa != sb) return sa < sb;
                     return a < b;
                   });
  return out;
}

Eigen::VectorXd polynomial_basis_at(const std::vector<std::vector<int>>& exps,
                                    const Eigen::VectorXd& x) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(exps.size()));
  for (std::size_t j = 0; j < exps.size(); ++j) {
    double v = 1.0;
    for (std::size_t k = 0; k < exps[j].size(); ++k)
      for (int e = 0; e < exps[j][k]; ++e) v *= x[static_cast<Eigen::Index>(k)];
    f[static_cast<Eigen::Index>(j)] = v;
  }
  return f;
}

double squared_exp_correlation(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b,
                               const std::vector<double>& lengthscales) {
  if (a.size() != b.size() ||
      a.size() != static_cast<Eigen::Index>(lengthscales.size()))
    throw config_error("correlation dimension mismatch");
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double z = (a[k] - b[k]) / lengthscales[static_cast<std::size_t>(k)];
    s += z * z;
  }
  return std::exp(-s);
}

KrigingModel KrigingModel::fit(const Eigen::MatrixXd& design,
                               const Eigen::VectorXd& responses,
                               const KrigingConfig& config) {
  const Eigen::Index n = design.rows();
  const Eigen::Index d = design.cols();
  if (n < 1) throw config_error("kriging needs at least one design point");
  if (responses.size() != n)
    throw config_error("responses must match the design row count");
  config.validate(static_cast<int>(d));

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((design.row(i) - design.row(j)).norm() == 0.0)
        throw fit_error("duplicate design points");

  KrigingModel model;
  model.design_ = design;
  model.responses_ = responses;
  model.config_ = config;
  model.exponents_ =
      polynomial_exponents(static_cast<int>(d), config.basis_degree);

  const Eigen::Index p = static_cast<Eigen::Index>(model.exponents_.size());
  if (n < p)
    throw fit_error("need at least as many design points as basis functions");

  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0 + config.nugget;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = squared_exp_correlation(
          design.row(i).transpose(), design.row(j).transpose(),
          config.lengthscales);
      r(i, j) = c;
      r(j, i) = c;
    }
  }

  model.llt_.compute(r);
  if (model.llt_.info() != Eigen::Success)
    throw fit_error("correlation matrix factorization failed; increase the "
                    "nugget or thin the design");

  model.f_.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    model.f_.row(i) =
        polynomial_basis_at(model.exponents_, design.row(i).transpose())
            .transpose();

  model.ri_f_ = model.llt_.solve(model.f_);
  const Eigen::MatrixXd gram = model.f_.transpose() * model.ri_f_;
  model.gram_.compute(gram);
  if (model.gram_.info() != Eigen::Success || !model.gram_.isPositive())
    throw fit_error("basis is rank-deficient at the design points");

  model.beta_ = model.gram_.solve(model.ri_f_.transpose() * responses);
  const Eigen::VectorXd resid = responses - model.f_ * model.beta_;
  model.weights_ = model.llt_.solve(resid);
  model.sigma2_ =
      std::max(0.0, resid.dot(model.weights_) / static_cast<double>(n));
  return model;
}

KrigingModel::Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
  const Eigen::Index n = design_.rows();
  if (x.size() != design_.cols())
    throw config_error("prediction point dimension mismatch");
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i)
    r[i] = squared_exp_correlation(x, design_.row(i).transpose(),
                                   config_.lengthscales);
  const Eigen::VectorXd f = polynomial_basis_at(exponents_, x);

  Prediction pred;
  pred.mean = f.dot(beta_) + r.dot(weights_);
  const Eigen::VectorXd ri_r = llt_.solve(r);
  const Eigen::VectorXd u = f_.transpose() * ri_r - f;
  const double var =
      sigma2_ * (1.0 - r.dot(ri_r) + u.dot(gram_.solve(u)));
  pred.variance = std::max(0.0, var);
  return pred;
}

std::string kriging_to_json_text(const KrigingModel& model) {
  json doc;
  doc["kind"] = "kriging_model";
  const Eigen::MatrixXd& x = model.design();
  doc["rows"] = x.rows();
  doc["cols"] = x.cols();
  std::vector<double> flat(static_cast<std::size_t>(x.size()));
  Eigen::Map<Eigen::MatrixXd>(flat.data(), x.rows(), x.cols()) = x;
  doc["design"] = flat;  // column-major
  doc["responses"] = std::vector<double>(
      model.responses().data(),
      model.responses().data() + model.responses().size());
  doc["lengthscales"] = model.config().lengthscales;
  doc["basis_degree"] = model.config().basis_degree;
  doc["nugget"] = model.config().nugget;
  return doc.dump(2);
}

KrigingModel kriging_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("kriging model parse failure: ") + e.what());
  }
  const auto rows = doc.at("rows").get<Eigen::Index>();
  const auto cols = doc.at("cols").get<Eigen::Index>();
  const auto flat = doc.at("design").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols)
    throw config_error("design array size mismatch");
  const Eigen::MatrixXd design =
      Eigen::Map<const Eigen::MatrixXd>(flat.data(), rows, cols);
  const auto resp = doc.at("responses").get<std::vector<double>>();
  const Eigen::VectorXd responses = Eigen::Map<const Eigen::VectorXd>(
      resp.data(), static_cast<Eigen::Index>(resp.size()));
  KrigingConfig config;
  config.lengthscales = doc.at("lengthscales").get<std::vector<double>>();
  config.basis_degree = doc.at("basis_degree").get<int>();
  config.nugget = doc.at("nugget").get<double>();
  // refitting on the exact stored inputs reproduces the model bit-for-bit
  return KrigingModel::fit(design, responses, config);
}

double eval_true_function(const TrueFunctionRef& fn, const Eigen::VectorXd& x) {
  if (fn.name == "sin2pi") {
    if (x.size() != 1) throw config_error("sin2pi is one-dimensional");
    return std::sin(2.0 * M_PI * x[0]);
  }
  if (fn.name == "poly1d") {
    if (x.size() != 1) throw config_error("poly1d is one-dimensional");
    if (fn.coefficients.empty())
      throw config_error("poly1d needs coefficients");
    double acc = 0.0;
    for (std::size_t k = fn.coefficients.size(); k-- > 0;)
      acc = acc * x[0] + fn.coefficients[k];
    return acc;
  }
  if (fn.name == "linear") {
    if (fn.coefficients.size() != static_cast<std::size_t>(x.size()) + 1)
      throw config_error("linear needs 1 + dim coefficients");
    double acc = fn.coefficients[0];
    for (Eigen::Index k = 0; k < x.size(); ++k)
      acc += fn.coefficients[static_cast<std::size_t>(k) + 1] * x[k];
    return acc;
  }
  throw config_error("unknown true function '" + fn.name + "'");
}

const std::vector<std::string>& true_function_names() {
  static const std::vector<std::string> names = {"sin2pi", "poly1d", "linear"};
  return names;
}

KrigingPairSamples kriging_surrogate_pair(
    const TrueFunctionRef& fn, double domain_lo, double domain_hi,
    const std::vector<long>& design_sizes, const KrigingConfig& config,
    const std::vector<double>& test_points, std::size_t M, StreamKey key) {
  if (!(domain_hi > domain_lo)) throw config_error("empty kriging domain");
  if (design_sizes.empty()) throw config_error("no design sizes given");
  for (std::size_t i = 0; i < design_sizes.size(); ++i) {
    if (design_sizes[i] < 1) throw config_error("design sizes must be >= 1");
    if (i > 0 && design_sizes[i] <= design_sizes[i - 1])
      throw config_error("design sizes must be increasing");
  }
  if (test_points.empty()) throw config_error("no test points given");
  if (M < 1) throw config_error("kriging_surrogate_pair needs M >= 1");
  config.validate(1);

  KrigingPairSamples out;
  const std::size_t T = test_points.size();
  for (const double t : test_points)
    if (t < domain_lo || t > domain_hi) {
      out.warnings.push_back("test point " + std::to_string(t) +
                             " lies outside the design domain");
    }

  for (const long size : design_sizes) {
    Eigen::MatrixXd design(size, 1);
    if (size == 1) {
      design(0, 0) = 0.5 * (domain_lo + domain_hi);
    } else {
      const double step =
          (domain_hi - domain_lo) / static_cast<double>(size - 1);
      for (long i = 0; i < size; ++i)
        design(i, 0) = domain_lo + step * static_cast<double>(i);
    }
    Eigen::VectorXd responses(size);
    for (long i = 0; i < size; ++i)
      responses[i] = eval_true_function(fn, design.row(i).transpose());

    const KrigingModel model = KrigingModel::fit(design, responses, config);

    KrigingDesignCheck check;
    check.design_size = size;
    for (long i = 0; i < size; ++i) {
      const auto pred = model.predict(design.row(i).transpose());
      check.max_design_error =
          std::max(check.max_design_error, std::abs(pred.mean - responses[i]));
      check.max_design_sd =
          std::max(check.max_design_sd, std::sqrt(pred.variance));
    }

    std::vector<double> means(T), sds(T), truths(T);
    double mean_gap_sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      Eigen::VectorXd x(1);
      x[0] = test_points[t];
      const auto pred = model.predict(x);
      means[t] = pred.mean;
      sds[t] = std::sqrt(pred.variance);
      truths[t] = eval_true_function(fn, x);
      check.max_test_sd = std::max(check.max_test_sd, sds[t]);
      mean_gap_sum += std::abs(pred.mean - truths[t]);
    }
    check.mean_abs_mean_gap = mean_gap_sum / static_cast<double>(T);
    out.checks.push_back(check);

    CoupledSample pair;
    pair.n = size;
    pair.x.resize(M * T);
    pair.y.resize(M * T);
    for (std::size_t m = 0; m < M; ++m) {
      RandomStream stream(StreamKey{
          key.master_seed, static_cast<std::uint32_t>(key.replication_id + m),
          key.lane_id});
      for (std::size_t t = 0; t < T; ++t) {
        const double z = stream.normal();
        pair.x[m * T + t] = truths[t] + sds[t] * z;
        pair.y[m * T + t] = means[t] + sds[t] * z;
      }
    }
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace mgap
