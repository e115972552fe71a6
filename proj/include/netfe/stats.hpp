#pragma once

#include <Eigen/Core>

namespace netfe {

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov-Smirnov statistic of a sample against the standard normal.
double ks_statistic_normal(Eigen::VectorXd sample);

/// Asymptotic KS p-value (Kolmogorov distribution with the usual small-sample
/// continuity correction).
double ks_pvalue_normal(const Eigen::VectorXd& sample);

/// Ordinary least squares slope of y on x (with intercept).
double ols_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace netfe
