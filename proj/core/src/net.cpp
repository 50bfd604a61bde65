#include "mgap/net.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mgap/errors.hpp"
#include "mgap/summation.hpp"

namespace mgap {
namespace {

using nlohmann::json;

Eigen::VectorXd apply_activation(Activation a, Eigen::VectorXd v) {
  switch (a) {
    case Activation::ReLU:
      return v.cwiseMax(0.0);
    case Activation::Tanh:
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::tanh(v[i]);
      return v;
    case Activation::Identity:
      return v;
  }
  throw config_error("unknown activation");
}

}  // namespace

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::ReLU;
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  throw config_error("unknown activation '" + name + "'");
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::ReLU: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
  }
  return "unknown";
}

double activation_constant(Activation) { return 1.0; }

void Box::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw config_error("box bounds must be nonempty and equally sized");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw config_error("box has lo > hi");
}

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

void NetModel::validate() const {
  if (layers.empty()) throw config_error("net has no layers");
  domain.validate();
  if (domain.lo.size() != input_dim())
    throw config_error("domain dimension does not match the first layer");
  Eigen::Index cols = input_dim();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const NetLayer& layer = layers[l];
    if (layer.weight.rows() == 0 || layer.weight.cols() == 0)
      throw config_error("empty weight matrix");
    if (layer.weight.cols() != cols)
      throw config_error("layer " + std::to_string(l) +
                         " does not chain with the previous output");
    if (layer.bias.size() != layer.weight.rows())
      throw config_error("layer " + std::to_string(l) + " bias size mismatch");
    cols = layer.weight.rows();
  }
}

Eigen::Index NetModel::zeta_dim() const {
  const NetLayer& last = layers.back();
  return last.weight.rows() * last.weight.cols();
}

Eigen::VectorXd NetModel::zeta() const {
  const NetLayer& last = layers.back();
  return Eigen::Map<const Eigen::VectorXd>(last.weight.data(),
                                           last.weight.size());
}

NetModel NetModel::with_zeta(const Eigen::VectorXd& z) const {
  if (z.size() != zeta_dim())
    throw config_error("zeta vector has wrong dimension");
  NetModel copy = *this;
  Eigen::Map<Eigen::VectorXd>(copy.layers.back().weight.data(),
                              copy.layers.back().weight.size()) = z;
  return copy;
}

Eigen::VectorXd hidden_forward(const NetModel& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim())
    throw config_error("input dimension mismatch");
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
    const NetLayer& layer = net.layers[l];
    h = apply_activation(layer.activation, layer.weight * h + layer.bias);
  }
  return h;
}

Eigen::VectorXd net_forward(const NetModel& net, const Eigen::VectorXd& x,
                            bool* outside_domain) {
  if (outside_domain != nullptr) *outside_domain = !net.domain.contains(x);
  const Eigen::VectorXd h = hidden_forward(net, x);
  const NetLayer& last = net.layers.back();
  return apply_activation(last.activation, last.weight * h + last.bias);
}

double spectral_norm(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXd v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = 1.0 + 1e-3 * static_cast<double>(i);  // deterministic, asymmetric
  v.normalize();
  double sigma = 0.0;
  for (int iter = 0; iter < 200000; ++iter) {
    const Eigen::VectorXd w = a * v;
    const double s = w.norm();
    if (s == 0.0) return 0.0;
    const Eigen::VectorXd u = a.transpose() * w;
    const double un = u.norm();
    if (un == 0.0) return s;
    v = u / un;
    if (iter > 0 && std::abs(s - sigma) <= rel_tol * s) return s;
    sigma = s;
  }
  return sigma;
}

LipschitzBound net_lipschitz(const NetModel& net) {
  net.validate();
  LipschitzBound bound;
  double l_full = 1.0;
  double l_sub = 1.0;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const double norm = spectral_norm(net.layers[l].weight) *
                        activation_constant(net.layers[l].activation);
    bound.layer_norms.push_back(norm);
    l_full *= norm;
    if (l + 1 < net.layers.size()) l_sub *= norm;
  }
  bound.input_lipschitz = l_full;
  const Eigen::VectorXd h_center = hidden_forward(net, net.domain.center());
  bound.parameter_lipschitz =
      l_sub * net.domain.radius() + h_center.norm();
  return bound;
}

InputLaw InputLaw::uniform_box() { return {Kind::UniformBox, 1.0}; }
InputLaw InputLaw::truncated_gaussian(double sigma2) {
  return {Kind::TruncatedGaussian, sigma2};
}

Eigen::VectorXd draw_input(const InputLaw& law, const Box& box,
                           RandomStream& stream) {
  const Eigen::Index d = box.lo.size();
  Eigen::VectorXd x(d);
  switch (law.kind) {
    case InputLaw::Kind::UniformBox:
      for (Eigen::Index i = 0; i < d; ++i)
        x[i] = box.lo[i] + stream.uniform01() * (box.hi[i] - box.lo[i]);
      return x;
    case InputLaw::Kind::TruncatedGaussian: {
      if (!(law.sigma2 > 0.0)) throw config_error("input sigma2 must be > 0");
      const double sd = std::sqrt(law.sigma2);
      const Eigen::VectorXd c = box.center();
      for (int tries = 0; tries < 100000; ++tries) {
        for (Eigen::Index i = 0; i < d; ++i) x[i] = c[i] + sd * stream.normal();
        if (box.contains(x)) return x;
      }
      throw resource_error("truncated Gaussian rejection failed to land in the box");
    }
  }
  throw config_error("unknown input law");
}

TheoremCGapReport theorem_c_gap(
    const NetModel& net, const Eigen::VectorXd& zeta_true,
    const std::vector<std::pair<long, Eigen::VectorXd>>& zeta_estimates,
    const InputLaw& law, std::size_t M, StreamKey key) {
  net.validate();
  if (M < 1) throw config_error("theorem_c_gap needs M >= 1");
  if (zeta_true.size() != net.zeta_dim())
    throw config_error("zeta_true has wrong dimension");
  for (const auto& [n, z] : zeta_estimates)
    if (z.size() != net.zeta_dim())
      throw config_error("zeta estimate for n=" + std::to_string(n) +
                         " has wrong dimension");

  const NetModel base = net.with_zeta(zeta_true);
  TheoremCGapReport report;
  report.parameter_lipschitz = net_lipschitz(net).parameter_lipschitz;
  report.replications = M;

  std::vector<double> gaps(M);
  for (const auto& [n, z_hat] : zeta_estimates) {
    const NetModel perturbed = net.with_zeta(z_hat);
    // identical inputs for every n: the stream restarts from the same key
    RandomStream stream(key);
    double max_gap = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const Eigen::VectorXd x = draw_input(law, net.domain, stream);
      const double g = (net_forward(base, x) - net_forward(perturbed, x)).norm();
      gaps[m] = g;
      if (g > max_gap) max_gap = g;
    }
    TheoremCGapRow row;
    row.n = n;
    row.zeta_dist = (z_hat - zeta_true).norm();
    row.max_gap = max_gap;
    row.mean_gap = mean(gaps);
    row.bound = report.parameter_lipschitz * row.zeta_dist;
    row.holds = row.max_gap <= row.bound + 1e-9;
    report.rows.push_back(row);
  }
  return report;
}

MomentBoundCheck net_moment_bound_check(const NetModel& net,
                                        const InputLaw& law, double delta,
                                        const std::optional<Eigen::VectorXd>& x0,
                                        std::size_t M, StreamKey key) {
  net.validate();
  if (!(delta > 0.0)) throw config_error("delta must be > 0");
  if (M < 1) throw config_error("net_moment_bound_check needs M >= 1");
  if (x0.has_value()) {
    if (x0->size() != net.input_dim())
      throw config_error("x0 has wrong dimension");
    const double root_residual = net_forward(net, *x0).norm();
    if (!(root_residual < 1e-9))
      throw config_error("x0 is not a root: |f(x0)| = " +
                         std::to_string(root_residual));
  }

  const double p = 1.0 + delta;
  const double L = net_lipschitz(net).input_lipschitz;
  MomentBoundCheck check;
  check.delta = delta;
  check.replications = M;

  RandomStream stream(key);
  std::vector<double> emp(M), dist_pow;
  if (x0.has_value()) dist_pow.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    const Eigen::VectorXd x = draw_input(law, net.domain, stream);
    emp[m] = std::pow(net_forward(net, x).norm(), p);
    if (x0.has_value()) dist_pow[m] = std::pow((x - *x0).norm(), p);
  }
  const MeanEstimate emp_est = mean_with_half_width(emp);
  check.empirical = emp_est.mean;
  check.empirical_hw = emp_est.half_width;

  if (x0.has_value()) {
    check.bound_available = true;
    const double mean_dist = mean(dist_pow);
    check.bound = std::pow(L, p) * mean_dist;
    check.bound_linear = L * mean_dist;
    // same-draw comparison; slack covers only rounding of the two means
    std::vector<double> diff(M);
    for (std::size_t m = 0; m < M; ++m)
      diff[m] = std::pow(L, p) * dist_pow[m] - emp[m];
    const double slack = mean_with_half_width(diff).half_width / 3.0 + 1e-12;
    check.holds = check.empirical <= check.bound + slack;
    for (std::size_t m = 0; m < M; ++m) diff[m] = L * dist_pow[m] - emp[m];
    const double slack_linear =
        mean_with_half_width(diff).half_width / 3.0 + 1e-12;
    check.holds_linear = check.empirical <= check.bound_linear + slack_linear;
  }
  return check;
}

std::string net_to_json_text(const NetModel& net) {
  net.validate();
  json doc;
  doc["kind"] = "net_model";
  doc["layers"] = json::array();
  for (const NetLayer& layer : net.layers) {
    json jl;
    jl["rows"] = layer.weight.rows();
    jl["cols"] = layer.weight.cols();
    std::vector<double> w(layer.weight.size());
    Eigen::Map<Eigen::MatrixXd>(w.data(), layer.weight.rows(),
                                layer.weight.cols()) = layer.weight;
    jl["weight"] = w;  // column-major
    jl["bias"] = std::vector<double>(layer.bias.data(),
                                     layer.bias.data() + layer.bias.size());
    jl["activation"] = activation_name(layer.activation);
    doc["layers"].push_back(jl);
  }
  doc["domain"]["lo"] = std::vector<double>(
      net.domain.lo.data(), net.domain.lo.data() + net.domain.lo.size());
  doc["domain"]["hi"] = std::vector<double>(
      net.domain.hi.data(), net.domain.hi.data() + net.domain.hi.size());
  return doc.dump(2);
}

NetModel net_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("net model parse failure: ") + e.what());
  }
  if (!doc.contains("layers") || !doc["layers"].is_array())
    throw config_error("net model text lacks a layers array");
  NetModel net;
  for (const json& jl : doc["layers"]) {
    NetLayer layer;
    const auto rows = jl.at("rows").get<Eigen::Index>();
    const auto cols = jl.at("cols").get<Eigen::Index>();
    const auto w = jl.at("weight").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols)
      throw config_error("weight array size mismatch");
    layer.weight = Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols);
    const auto b = jl.at("bias").get<std::vector<double>>();
    layer.bias = Eigen::Map<const Eigen::VectorXd>(
        b.data(), static_cast<Eigen::Index>(b.size()));
    layer.activation = activation_from_name(jl.at("activation").get<std::string>());
    net.layers.push_back(std::move(layer));
  }
  const auto lo = doc.at("domain").at("lo").get<std::vector<double>>();
  const auto hi = doc.at("domain").at("hi").get<std::vector<double>>();
  net.domain.lo = Eigen::Map<const Eigen::VectorXd>(
      lo.data(), static_cast<Eigen::Index>(lo.size()));
  net.domain.hi = Eigen::Map<const Eigen::VectorXd>(
      hi.data(), static_cast<Eigen::Index>(hi.size()));
  net.validate();
  return net;
}

const std::map<std::string, NetModel>& net_registry() {
  static const std::map<std::string, NetModel> registry = [] {
    std::map<std::string, NetModel> nets;

    const auto box = [](double lo, double hi, Eigen::Index d) {
      Box b;
      b.lo = Eigen::VectorXd::Constant(d, lo);
      b.hi = Eigen::VectorXd::Constant(d, hi);
      return b;
    };

    {
      NetModel net;
      net.layers.push_back({Eigen::MatrixXd::Identity(1, 1),
                            Eigen::VectorXd::Zero(1), Activation::Identity});
      net.domain = box(-1.0, 1.0, 1);
      nets.emplace("identity_1d", std::move(net));
    }
    {
      NetModel net;
      net.layers.push_back({2.0 * Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Zero(2), Activation::ReLU});
      net.layers.push_back({3.0 * Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Zero(2), Activation::ReLU});
      net.domain = box(-1.0, 1.0, 2);
      nets.emplace("relu_2x3", std::move(net));
    }
    {
      NetModel net;
      net.layers.push_back({2.0 * Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Zero(2), Activation::ReLU});
      net.layers.push_back({3.0 * Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Zero(2), Activation::Identity});
      net.domain = box(-1.0, 1.0, 2);
      nets.emplace("relu_linear_2x3", std::move(net));
    }
    {
      NetModel net;
      Eigen::MatrixXd w1(2, 2);
      w1 << 0.8, -0.3, 0.5, 0.4;
      Eigen::VectorXd b1(2);
      b1 << 0.1, -0.2;
      Eigen::MatrixXd w2(1, 2);
      w2 << 1.2, -0.7;
      Eigen::VectorXd b2(1);
      b2 << 0.05;
      net.layers.push_back({w1, b1, Activation::Tanh});
      net.layers.push_back({w2, b2, Activation::Identity});
      net.domain = box(-1.0, 1.0, 2);
      nets.emplace("tanh_mix", std::move(net));
    }
    return nets;
  }();
  return registry;
}

const NetModel& find_net(const std::string& name) {
  const auto& registry = net_registry();
  const auto it = registry.find(name);
  if (it == registry.end())
    throw config_error("unknown net '" + name + "'");
  return it->second;
}

}  // namespace mgap
