#include "netfe/moments.hpp"

#include "netfe/error.hpp"

namespace netfe {

double sample_variance(const Eigen::VectorXd& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 2) throw InputError("sample variance needs n >= 2");
  const double mean = alpha.mean();
  return (alpha.array() - mean).square().sum() / (n - 1);
}

VarianceNoiseBias variance_noise_bias(const LaplacianPseudoinverse& lstar,
                                      double sigma2) {
  const int n = lstar.n();
  if (n < 2) throw InputError("bias needs n >= 2");
  const Eigen::MatrixXd& Ls = lstar.dense();
  const double tr = Ls.trace();
  // tr(M_iota L* M_iota) = tr(L*) - iota'L* iota / n
  const double tr_centered = tr - Ls.sum() / n;

  VarianceNoiseBias out;
  out.sigma2 = sigma2;
  out.literal = sigma2 * tr / (n - 1);
  out.centered = sigma2 * tr_centered / (n - 1);
  return out;
}

MomentEstimate bias_corrected_variance(const Eigen::VectorXd& alpha,
                                       double sigma2_hat,
                                       const LaplacianPseudoinverse& lstar) {
  MomentEstimate out;
  out.tau_hat = sample_variance(alpha);
  out.bias_hat = variance_noise_bias(lstar, sigma2_hat).centered;
  out.tau_corrected = out.tau_hat - out.bias_hat;
  return out;
}

MomentEstimate functional_bias(const GraphMatrices& gm, const FixedEffectFit& fit,
                               const Functional& phi, const Functional& phi_dd,
                               SeMode variant) {
  if (variant == SeMode::homoskedastic) {
    throw InputError("functional bias uses a plug-in residual variant");
  }
  const int n = gm.n();
  Eigen::VectorXd sq = fit.residuals.array().square();
  if (variant == SeMode::plugin_inid) sq /= static_cast<double>(gm.m());
  Eigen::VectorXd quad = quadratic_diag_form(gm, sq);  // b_i' Sigma_check b_i

  MomentEstimate out;
  double tau = 0.0, bias = 0.0;
  for (int v = 0; v < n; ++v) {
    tau += phi(fit.alpha[v]);
    bias += 0.5 * phi_dd(fit.alpha[v]) * quad[v] / (gm.d[v] * gm.d[v]);
  }
  out.tau_hat = tau / n;
  out.bias_hat = bias / n;
  out.tau_corrected = out.tau_hat - out.bias_hat;
  return out;
}

}  // namespace netfe
