#include "mgap/innovations.hpp"

#include <cmath>

#include "mgap/errors.hpp"

namespace mgap {
namespace {

// Polar variant of Bailey's method: exact Student t without inverse-CDF
// evaluation. With (u,v) uniform on the unit disc minus the origin and
// w = u^2 + v^2, the ratio u * sqrt(nu (w^{-2/nu} - 1) / w) is t_nu.
double sample_student_t(double nu, RandomStream& stream) {
  double u, v, w;
  do {
    u = 2.0 * stream.uniform01() - 1.0;
    v = 2.0 * stream.uniform01() - 1.0;
    w = u * u + v * v;
  } while (w >= 1.0 || w == 0.0);
  return u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
}

}  // namespace

InnovationSpec InnovationSpec::gaussian(double sigma2) {
  InnovationSpec s;
  s.family = InnovationFamily::Gaussian;
  s.sigma2 = sigma2;
  return s;
}

InnovationSpec InnovationSpec::student_t(double nu, double sigma2) {
  InnovationSpec s;
  s.family = InnovationFamily::StudentT;
  s.nu = nu;
  s.sigma2 = sigma2;
  return s;
}

InnovationSpec InnovationSpec::centered_exponential(double rate) {
  InnovationSpec s;
  s.family = InnovationFamily::CenteredExponential;
  s.rate = rate;
  return s;
}

InnovationSpec InnovationSpec::scaled_uniform(double half_width) {
  InnovationSpec s;
  s.family = InnovationFamily::ScaledUniform;
  s.half_width = half_width;
  return s;
}

void InnovationSpec::validate() const {
  switch (family) {
    case InnovationFamily::Gaussian:
      if (!(sigma2 > 0.0)) throw config_error("innovation sigma2 must be > 0");
      break;
    case InnovationFamily::StudentT:
      if (!(sigma2 > 0.0)) throw config_error("innovation sigma2 must be > 0");
      if (!(nu > 4.0)) throw config_error("innovation nu must be > 4");
      break;
    case InnovationFamily::CenteredExponential:
      if (!(rate > 0.0)) throw config_error("innovation rate must be > 0");
      break;
    case InnovationFamily::ScaledUniform:
      if (!(half_width > 0.0))
        throw config_error("innovation half_width must be > 0");
      break;
  }
}

double InnovationSpec::variance() const { return moments_of(*this, 2); }

std::string InnovationSpec::family_name() const {
  switch (family) {
    case InnovationFamily::Gaussian: return "gaussian";
    case InnovationFamily::StudentT: return "student_t";
    case InnovationFamily::CenteredExponential: return "centered_exponential";
    case InnovationFamily::ScaledUniform: return "scaled_uniform";
  }
  return "unknown";
}

double sample_one(const InnovationSpec& spec, RandomStream& stream) {
  switch (spec.family) {
    case InnovationFamily::Gaussian:
      return std::sqrt(spec.sigma2) * stream.normal();
    case InnovationFamily::StudentT: {
      // Scale so the variance equals sigma2: Var(t_nu) = nu / (nu - 2).
      const double scale = std::sqrt(spec.sigma2 * (spec.nu - 2.0) / spec.nu);
      return scale * sample_student_t(spec.nu, stream);
    }
    case InnovationFamily::CenteredExponential:
      return stream.exponential(spec.rate) - 1.0 / spec.rate;
    case InnovationFamily::ScaledUniform:
      return spec.half_width * (2.0 * stream.uniform01() - 1.0);
  }
  throw config_error("unknown innovation family");
}

std::vector<double> sample_innovations(const InnovationSpec& spec,
                                       std::size_t count,
                                       RandomStream& stream) {
  spec.validate();
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(spec, stream));
  return out;
}

double moments_of(const InnovationSpec& spec, int order) {
  spec.validate();
  if (order < 1 || order > 4)
    throw config_error("moments_of supports orders 1 through 4");
  switch (spec.family) {
    case InnovationFamily::Gaussian:
      switch (order) {
        case 1: return 0.0;
        case 2: return spec.sigma2;
        case 3: return 0.0;
        default: return 3.0 * spec.sigma2 * spec.sigma2;
      }
    case InnovationFamily::StudentT:
      switch (order) {
        case 1: return 0.0;
        case 2: return spec.sigma2;
        case 3: return 0.0;
        default:
          // kurtosis of t_nu is 3 (nu - 2) / (nu - 4)
          return 3.0 * spec.sigma2 * spec.sigma2 * (spec.nu - 2.0) /
                 (spec.nu - 4.0);
      }
    case InnovationFamily::CenteredExponential: {
      const double m = 1.0 / spec.rate;
      switch (order) {
        case 1: return 0.0;
        case 2: return m * m;
        case 3: return 2.0 * m * m * m;
        default: return 9.0 * m * m * m * m;
      }
    }
    case InnovationFamily::ScaledUniform: {
      const double a2 = spec.half_width * spec.half_width;
      switch (order) {
        case 1: return 0.0;
        case 2: return a2 / 3.0;
        case 3: return 0.0;
        default: return a2 * a2 / 5.0;
      }
    }
  }
  throw config_error("unknown innovation family");
}

}  // namespace mgap
