#include "netfe/estimator.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>

#include "netfe/error.hpp"

namespace netfe {

Eigen::VectorXd fit_alpha_known_beta(const GraphMatrices& gm,
                                     const Eigen::VectorXd& z,
                                     const LaplacianPseudoinverse& lstar) {
  if (z.size() != gm.m()) throw InputError("outcome length does not match edge count");
  return lstar.apply(gm.B.transpose() * z);
}

Eigen::VectorXd fit_alpha_known_beta(const Graph& g, const Eigen::VectorXd& z) {
  if (!is_connected(g)) {
    throw InputError("graph disconnected: fit on largest_component instead");
  }
  GraphMatrices gm = matrices(g);
  LaplacianPseudoinverse lstar(gm);
  return fit_alpha_known_beta(gm, z, lstar);
}

RankReport check_rank_conditions(const GraphMatrices& gm, const Eigen::MatrixXd& X,
                                 const LaplacianPseudoinverse& lstar,
                                 bool connected) {
  RankReport r;
  r.connected = connected;
  const int p = static_cast<int>(X.cols());
  if (p == 0) return r;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  double max_col = 0.0;
  for (int c = 0; c < p; ++c) max_col = std::max(max_col, X.col(c).norm());
  qr.setThreshold(1e-10 * std::max(max_col, 1.0));
  if (qr.rank() < p) {
    r.x_full_rank = false;
    r.deficiency = p - static_cast<int>(qr.rank());
    return r;
  }

  // rank((X,B)) = p + n - 1  <=>  X'M_B X nonsingular (connected graph).
  Eigen::MatrixXd BtX = gm.B.transpose() * X;
  Eigen::MatrixXd XMBX = X.transpose() * X - BtX.transpose() * lstar.apply_matrix(BtX);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(XMBX, Eigen::EigenvaluesOnly);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-30);
  int rank = 0;
  for (int i = 0; i < p; ++i) {
    if (es.eigenvalues()[i] > 1e-10 * scale) ++rank;
  }
  if (rank < p) {
    r.joint_full_rank = false;
    r.deficiency = p - rank;
  }
  return r;
}

FixedEffectFit fit_full(const GraphMatrices& gm, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& X,
                        const LaplacianPseudoinverse& lstar) {
  const int m = gm.m();
  const int p = static_cast<int>(X.cols());
  if (y.size() != m) throw InputError("outcome length does not match edge count");
  if (p > 0 && X.rows() != m) throw InputError("covariate rows do not match edge count");

  FixedEffectFit fit;
  fit.rank_report = check_rank_conditions(gm, X, lstar, /*connected=*/true);
  if (!fit.rank_report.x_full_rank) {
    throw InputError("collinear covariates: rank(X) deficient by " +
                     std::to_string(fit.rank_report.deficiency));
  }
  if (!fit.rank_report.joint_full_rank) {
    throw InputError("covariates collinear with network dummies: rank((X,B)) "
                     "deficient by " +
                     std::to_string(fit.rank_report.deficiency));
  }

  if (p == 0) {
    fit.alpha = fit_alpha_known_beta(gm, y, lstar);
    fit.beta = Eigen::VectorXd();
    fit.residuals = y - gm.B * fit.alpha;
    return fit;
  }

  // beta_check = (X'M_B X)^{-1} X'M_B y with M_B = I - B L* B'.
  Eigen::MatrixXd BtX = gm.B.transpose() * X;
  Eigen::VectorXd Bty = gm.B.transpose() * y;
  Eigen::MatrixXd LsBtX = lstar.apply_matrix(BtX);
  Eigen::MatrixXd XMBX = X.transpose() * X - BtX.transpose() * LsBtX;
  Eigen::VectorXd XMBy = X.transpose() * y - LsBtX.transpose() * Bty;
  fit.beta = XMBX.ldlt().solve(XMBy);
  fit.alpha = fit_alpha_known_beta(gm, y - X * fit.beta, lstar);
  fit.residuals = y - gm.B * fit.alpha - X * fit.beta;
  return fit;
}

FixedEffectFit fit_full(const Graph& g, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& X) {
  if (!is_connected(g)) {
    throw InputError("graph disconnected: fit on largest_component instead");
  }
  GraphMatrices gm = matrices(g);
  LaplacianPseudoinverse lstar(gm);
  return fit_full(gm, y, X, lstar);
}

FixedEffectFit fit_alternative_normalization(const FixedEffectFit& fit) {
  if (fit.normalization != Normalization::d_weighted) {
    throw InputError("alternative normalization expects a d-weighted fit");
  }
  FixedEffectFit out = fit;
  out.alpha = fit.alpha.array() - fit.alpha.mean();
  out.normalization = Normalization::mean_zero;
  return out;
}

}  // namespace netfe
