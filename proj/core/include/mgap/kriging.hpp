#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mgap/moment_gap.hpp"
#include "mgap/rng.hpp"

namespace mgap {

struct KrigingConfig {
  std::vector<double> lengthscales;  // one per input dimension
  int basis_degree = 0;              // total-degree polynomial regression part
  double nugget = 1e-10;

  void validate(int dim) const;
};

// Exponents of the monomial basis up to the given total degree, in a fixed
// graded order; size is C(dim + degree, degree).
std::vector<std::vector<int>> polynomial_exponents(int dim, int degree);

Eigen::VectorXd polynomial_basis_at(const std::vector<std::vector<int>>& exps,
                                    const Eigen::VectorXd& x);

// Squared-exponential correlation exp(-sum_k ((a_k-b_k)/l_k)^2), unit at
// zero lag, no nugget.
double squared_exp_correlation(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b,
                               const std::vector<double>& lengthscales);

// Universal kriging: regression on a polynomial basis plus a Gaussian
// process with squared-exponential correlation. Fitting solves the BLUP
// normal equations through a Cholesky factorization of the nugget-dampened
// correlation matrix.
class KrigingModel {
 public:
  static KrigingModel fit(const Eigen::MatrixXd& design,
                          const Eigen::VectorXd& responses,
                          const KrigingConfig& config);

  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;  // clamped at 0
  };
  Prediction predict(const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& beta() const { return beta_; }
  double process_variance() const { return sigma2_; }
  const Eigen::MatrixXd& design() const { return design_; }
  const Eigen::VectorXd& responses() const { return responses_; }
  const KrigingConfig& config() const { return config_; }

 private:
  KrigingModel() = default;

  Eigen::MatrixXd design_;      // n x d
  Eigen::VectorXd responses_;   // n
  KrigingConfig config_;
  std::vector<std::vector<int>> exponents_;
  Eigen::LLT<Eigen::MatrixXd> llt_;   // of R + nugget I
  Eigen::MatrixXd f_;                 // n x p basis at design
  Eigen::MatrixXd ri_f_;              // R^{-1} F
  Eigen::LDLT<Eigen::MatrixXd> gram_; // of F' R^{-1} F
  Eigen::VectorXd beta_;
  Eigen::VectorXd weights_;           // R^{-1} (y - F beta)
  double sigma2_ = 0.0;
};

std::string kriging_to_json_text(const KrigingModel& model);
KrigingModel kriging_from_json_text(const std::string& text);

// Closed-form target functions for surrogate experiments.
struct TrueFunctionRef {
  std::string name;                 // sin2pi | poly1d | linear
  std::vector<double> coefficients;  // poly1d: c0..ck; linear: c0, c1..cd
};

double eval_true_function(const TrueFunctionRef& fn, const Eigen::VectorXd& x);
const std::vector<std::string>& true_function_names();

// Coupled (true, surrogate) samples over growing designs: per replication
// and test point, Y = kriging mean + sd * Z and X = g + sd * Z with one
// shared Gaussian draw Z, so the pair lives on one probability space.
struct KrigingDesignCheck {
  long design_size = 0;
  double max_design_error = 0.0;  // |predicted - response| at design points
  double max_design_sd = 0.0;
  double max_test_sd = 0.0;
  double mean_abs_mean_gap = 0.0;  // mean over test points of |mean - g|
};

struct KrigingPairSamples {
  std::vector<CoupledSample> pairs;          // one per design size
  std::vector<KrigingDesignCheck> checks;
  std::vector<std::string> warnings;
};

KrigingPairSamples kriging_surrogate_pair(
    const TrueFunctionRef& fn, double domain_lo, double domain_hi,
    const std::vector<long>& design_sizes, const KrigingConfig& config,
    const std::vector<double>& test_points, std::size_t M, StreamKey key);

}  // namespace mgap
