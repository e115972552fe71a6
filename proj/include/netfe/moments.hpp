#pragma once

#include <Eigen/Core>
#include <functional>

#include "netfe/estimator.hpp"
#include "netfe/inference.hpp"

namespace netfe {

/// alpha' M_iota alpha / (n - 1).
double sample_variance(const Eigen::VectorXd& alpha);

/// The noise contribution to the expected sample variance of the estimated
/// effects under homoskedastic errors. `literal` is sigma^2 tr(L*)/(n-1);
/// `centered` is sigma^2 tr(M_iota L* M_iota)/(n-1), the exact expectation of
/// the demeaned quadratic form and the value used for corrections.
struct VarianceNoiseBias {
  double literal = 0.0;
  double centered = 0.0;
  double sigma2 = 0.0;
};

VarianceNoiseBias variance_noise_bias(const LaplacianPseudoinverse& lstar,
                                      double sigma2);

/// Plug-in moment estimate with its leading-bias estimate.
struct MomentEstimate {
  double tau_hat = 0.0;
  double bias_hat = 0.0;
  double tau_corrected = 0.0;  // tau_hat - bias_hat
};

/// Bias-corrected sample variance of the estimated effects:
/// sample_variance(alpha) - sigma2_hat tr(M_iota L* M_iota)/(n-1).
MomentEstimate bias_corrected_variance(const Eigen::VectorXd& alpha,
                                       double sigma2_hat,
                                       const LaplacianPseudoinverse& lstar);

using Functional = std::function<double(double)>;

/// Plug-in estimate of tau = E phi(alpha_i) with the leading bias
///   b_hat = n^{-1} sum_i phi''(alpha_check_i)/2 * (b_i' Sigma_check b_i) / d_i^2
/// removed. Sigma_check is diag(u u') by default (see SeMode); the caller
/// supplies phi and phi''.
MomentEstimate functional_bias(const GraphMatrices& gm, const FixedEffectFit& fit,
                               const Functional& phi, const Functional& phi_dd,
                               SeMode variant = SeMode::plugin_unscaled);

}  // namespace netfe
