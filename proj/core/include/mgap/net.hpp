#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgap/rng.hpp"

namespace mgap {

enum class Activation { ReLU, Tanh, Identity };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);
double activation_constant(Activation a);  // Lipschitz constant, 1 for all tags

struct NetLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
  Activation activation = Activation::Identity;
};

// Axis-aligned compact input domain.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  void validate() const;
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  Eigen::VectorXd half_widths() const { return 0.5 * (hi - lo); }
  double radius() const { return half_widths().norm(); }
  bool contains(const Eigen::VectorXd& x) const;
};

// Feedforward net f(x) = f_H(W_H f_{H-1}(...) + b_H) on a box domain.
// The parameter split used throughout: zeta = vec of the last weight
// matrix, eta = everything else.
struct NetModel {
  std::vector<NetLayer> layers;
  Box domain;

  void validate() const;
  Eigen::Index input_dim() const { return layers.front().weight.cols(); }
  Eigen::Index output_dim() const { return layers.back().weight.rows(); }

  Eigen::Index zeta_dim() const;
  Eigen::VectorXd zeta() const;
  NetModel with_zeta(const Eigen::VectorXd& z) const;
};

// Output of the sub-network below the last layer (the input itself for a
// single-layer net).
Eigen::VectorXd hidden_forward(const NetModel& net, const Eigen::VectorXd& x);

// Full evaluation, composed as (sub-network, then last layer) so the split
// used by the parameter bound is exactly the evaluation path.
// outside_domain, when given, reports the soft domain check.
Eigen::VectorXd net_forward(const NetModel& net, const Eigen::VectorXd& x,
                            bool* outside_domain = nullptr);

// Largest singular value by power iteration on A^T A.
double spectral_norm(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

struct LipschitzBound {
  double input_lipschitz = 0.0;      // product of layer norms and act consts
  double parameter_lipschitz = 0.0;  // sup over the box of |h(x)|
  std::vector<double> layer_norms;
};

LipschitzBound net_lipschitz(const NetModel& net);

// Input distribution over the net's domain box.
struct InputLaw {
  enum class Kind { UniformBox, TruncatedGaussian };
  Kind kind = Kind::UniformBox;
  double sigma2 = 1.0;  // TruncatedGaussian: variance before truncation

  static InputLaw uniform_box();
  static InputLaw truncated_gaussian(double sigma2 = 1.0);
};

Eigen::VectorXd draw_input(const InputLaw& law, const Box& box,
                           RandomStream& stream);

struct TheoremCGapRow {
  long n = 0;
  double zeta_dist = 0.0;  // ||zeta_hat - zeta||
  double max_gap = 0.0;
  double mean_gap = 0.0;
  double bound = 0.0;  // parameter_lipschitz * zeta_dist
  bool holds = false;  // max_gap <= bound + 1e-9
};

struct TheoremCGapReport {
  double parameter_lipschitz = 0.0;
  std::size_t replications = 0;
  std::vector<TheoremCGapRow> rows;
};

// Gap between f(.; zeta) and f(.; zeta_hat_n) over shared input draws.
// Every n re-opens the same stream, so all rows see identical inputs.
TheoremCGapReport theorem_c_gap(
    const NetModel& net, const Eigen::VectorXd& zeta_true,
    const std::vector<std::pair<long, Eigen::VectorXd>>& zeta_estimates,
    const InputLaw& law, std::size_t M, StreamKey key);

struct MomentBoundCheck {
  double delta = 0.0;
  std::size_t replications = 0;
  double empirical = 0.0;     // mean |f(X)|^{1+delta}
  double empirical_hw = 0.0;
  bool bound_available = false;
  double bound = 0.0;         // L^{1+delta} * mean |X - x0|^{1+delta}
  double bound_linear = 0.0;  // L * mean |X - x0|^{1+delta}
  bool holds = false;
  bool holds_linear = false;
};

// Moment bound at a root point x0 (|f(x0)| must be < 1e-9); pass nullopt
// for skip-bound mode, which reports the empirical moment only.
MomentBoundCheck net_moment_bound_check(const NetModel& net,
                                        const InputLaw& law, double delta,
                                        const std::optional<Eigen::VectorXd>& x0,
                                        std::size_t M, StreamKey key);

// Structured-text model exchange with exact round-trip.
std::string net_to_json_text(const NetModel& net);
NetModel net_from_json_text(const std::string& text);

// Small fixed catalog of example nets used by experiments and tests.
const std::map<std::string, NetModel>& net_registry();
const NetModel& find_net(const std::string& name);

}  // namespace mgap
