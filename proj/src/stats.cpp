#include "netfe/stats.hpp"

#include <algorithm>
#include <cmath>

#include "netfe/error.hpp"

namespace netfe {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_normal(Eigen::VectorXd sample) {
  const int n = static_cast<int>(sample.size());
  if (n == 0) throw InputError("KS statistic of empty sample");
  std::sort(sample.data(), sample.data() + n);
  double d = 0.0;
  for (int k = 0; k < n; ++k) {
    const double f = normal_cdf(sample[k]);
    d = std::max(d, std::abs(f - static_cast<double>(k) / n));
    d = std::max(d, std::abs(static_cast<double>(k + 1) / n - f));
  }
  return d;
}

double ks_pvalue_normal(const Eigen::VectorXd& sample) {
  const double n = static_cast<double>(sample.size());
  const double d = ks_statistic_normal(sample);
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double ols_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope needs paired data");
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  return sxy / sxx;
}

}  // namespace netfe
