#include "mgap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mgap/errors.hpp"

namespace mgap {

double two_sample_ks_statistic(std::span<const double> a,
                               std::span<const double> b) {
  if (a.empty() || b.empty()) throw config_error("KS needs nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) v = x[i];
    else v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  return d;
}

double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha) {
  if (n1 == 0 || n2 == 0) throw config_error("KS needs nonempty samples");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw config_error("alpha must lie in (0,1)");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double m = static_cast<double>(n1);
  const double n = static_cast<double>(n2);
  return c * std::sqrt((m + n) / (m * n));
}

}  // namespace mgap
