#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mgap/rng.hpp"

namespace mgap {

enum class InnovationFamily { Gaussian, StudentT, CenteredExponential, ScaledUniform };

// Centered noise distribution used to drive the simulated processes.
// Every family has mean zero; StudentT requires nu > 4 so that fourth
// moments exist and empirical moment checks have CLT rates.
struct InnovationSpec {
  InnovationFamily family = InnovationFamily::Gaussian;
  double sigma2 = 1.0;      // Gaussian / StudentT target variance
  double nu = 5.0;          // StudentT degrees of freedom
  double rate = 1.0;        // CenteredExponential rate
  double half_width = 1.0;  // ScaledUniform support half-width

  static InnovationSpec gaussian(double sigma2 = 1.0);
  static InnovationSpec student_t(double nu, double sigma2 = 1.0);
  static InnovationSpec centered_exponential(double rate = 1.0);
  static InnovationSpec scaled_uniform(double half_width = 1.0);

  // Throws config_error naming the offending parameter.
  void validate() const;

  double variance() const;
  std::string family_name() const;
};

double sample_one(const InnovationSpec& spec, RandomStream& stream);

std::vector<double> sample_innovations(const InnovationSpec& spec,
                                       std::size_t count, RandomStream& stream);

// Exact central moment of the given order (1 through 4).
double moments_of(const InnovationSpec& spec, int order);

}  // namespace mgap
