#include "netfe/inference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "netfe/error.hpp"

namespace netfe {

HarmonicMeans harmonic_means(const NeighborIndex& nbr, const Eigen::VectorXd& d) {
  const int n = nbr.n();
  HarmonicMeans hm;
  hm.h_i.resize(n);
  hm.h_i2.resize(n);
  hm.H_i.resize(n);

  for (int v = 1; v <= n; ++v) {
    double s2 = 0.0, s1 = 0.0;
    for (const auto& [u, a] : nbr.neighbors(v)) {
      s2 += a * a / d[u - 1];
      s1 += a / d[u - 1];
    }
    hm.h_i[v - 1] = d[v - 1] / s2;
    hm.h_i2[v - 1] = d[v - 1] / s1;
  }
  for (int v = 1; v <= n; ++v) {
    double s = 0.0;
    for (const auto& [u, a] : nbr.neighbors(v)) {
      s += 1.0 / (d[u - 1] * hm.h_i[u - 1]);
    }
    hm.H_i[v - 1] = d[v - 1] / (hm.h_i[v - 1] * s);
  }
  hm.h = n / d.cwiseInverse().sum();
  double sH = 0.0;
  for (int v = 0; v < n; ++v) sH += 1.0 / (d[v] * hm.h_i[v]);
  hm.H = n / (hm.h * sH);
  return hm;
}

namespace {

ConnectivityReport report_skeleton(const Graph& g, const GraphMatrices& gm) {
  if (!is_connected(g)) {
    throw InputError("connectivity report requires a connected graph");
  }
  NeighborIndex nbr(g);
  HarmonicMeans hm = harmonic_means(nbr, gm.d);

  ConnectivityReport rep;
  rep.n = g.vertex_count();
  rep.m = g.edge_count();
  rep.lambda2 = lambda2(gm);
  rep.h = hm.h;
  rep.H = hm.H;
  rep.d = gm.d;
  rep.h_i = hm.h_i;
  rep.H_i = hm.H_i;
  rep.h_i2 = hm.h_i2;
  return rep;
}

}  // namespace

ConnectivityReport connectivity_report(const Graph& g, const Eigen::MatrixXd& X) {
  GraphMatrices gm = matrices(g);
  ConnectivityReport rep = report_skeleton(g, gm);
  LaplacianPseudoinverse lstar(gm);
  rep.diag_Sdag = gm.d.cwiseProduct(lstar.diag());
  if (X.cols() > 0) {
    rep.rho = rho_and_xbar(gm, X, lstar).rho;
  }
  return rep;
}

ConnectivityReport connectivity_report_with_diag(const Graph& g,
                                                 const Eigen::VectorXd& diag_Sdag) {
  GraphMatrices gm = matrices(g);
  ConnectivityReport rep = report_skeleton(g, gm);
  if (diag_Sdag.size() != gm.n()) throw InputError("diagonal length mismatch");
  rep.diag_Sdag = diag_Sdag;
  return rep;
}

RhoXbar rho_and_xbar(const GraphMatrices& gm, const Eigen::MatrixXd& X,
                     const LaplacianPseudoinverse& lstar) {
  const int p = static_cast<int>(X.cols());
  if (p == 0) throw InputError("rho requires at least one covariate");
  const int m = gm.m();
  if (X.rows() != m) throw InputError("covariate rows do not match edge count");

  Eigen::MatrixXd G = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esg(G);
  if (esg.eigenvalues().minCoeff() <=
      1e-12 * std::max(esg.eigenvalues().maxCoeff(), 1e-300)) {
    throw InputError("rank-deficient covariates");
  }
  Eigen::MatrixXd G_isqrt = esg.operatorInverseSqrt();

  // C~ = G^{-1/2} X'B L* B'X G^{-1/2}; rho = 1 - ||C~||_2.
  Eigen::MatrixXd BtX = gm.B.transpose() * X;
  Eigen::MatrixXd C = G_isqrt * BtX.transpose() * lstar.apply_matrix(BtX) * G_isqrt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esc(C, Eigen::EigenvaluesOnly);
  double rho = 1.0 - esc.eigenvalues().maxCoeff();
  rho = std::clamp(rho, 0.0, 1.0);

  RhoXbar out;
  out.rho = rho;
  out.xbar = BtX;  // row i of B'X is b_i'X; scale by 1/d_i
  out.xbar.array().colwise() /= gm.d.array();
  out.omega = G / static_cast<double>(m);
  return out;
}

VertexBounds variance_bounds(const Eigen::VectorXd& d, const Eigen::VectorXd& h_i,
                             double lambda2, double degree_sum, double sigma2) {
  if (!(sigma2 > 0)) throw InputError("sigma2 must be positive");
  VertexBounds vb;
  vb.sigma2 = sigma2;
  const double c = 2.0 * sigma2 / degree_sum;
  vb.lower = (sigma2 * d.cwiseInverse()).array() - c;
  vb.upper = (sigma2 * d.cwiseInverse().cwiseProduct(
                           (1.0 + (lambda2 * h_i.array()).inverse()).matrix()))
                 .array() -
             c;
  return vb;
}

PairBounds difference_variance_bounds(const NeighborIndex& nbr,
                                      const Eigen::VectorXd& d, double lambda2,
                                      double sigma2, int i, int j) {
  if (i == j) throw InputError("difference bounds need distinct vertices");
  const int n = nbr.n();
  if (i < 1 || i > n || j < 1 || j > n) throw InputError("vertex id out of range");

  double a_ij = 0.0;
  for (const auto& [u, a] : nbr.neighbors(i)) {
    if (u == j) a_ij = a;
  }
  // cross = sum_k A_ik A_jk / d_k = d_ij / h_ij (0 when neighborhoods are
  // disjoint, the 1/h_ij -> 0 convention), and the per-vertex terms
  // sum_k A_ik^2 / d_k = d_i / h_i.
  double cross = 0.0, self_i = 0.0, self_j = 0.0;
  {
    std::vector<double> row_i(n + 1, 0.0);
    for (const auto& [u, a] : nbr.neighbors(i)) {
      row_i[u] = a;
      self_i += a * a / d[u - 1];
    }
    for (const auto& [u, a] : nbr.neighbors(j)) {
      self_j += a * a / d[u - 1];
      if (row_i[u] != 0.0) cross += row_i[u] * a / d[u - 1];
    }
  }

  const double di = d[i - 1], dj = d[j - 1];
  const double base =
      sigma2 * (1.0 / di + 1.0 / dj - 2.0 * a_ij / (di * dj));
  PairBounds pb;
  pb.lower = base;
  pb.upper = base + (sigma2 / lambda2) *
                        (self_i / (di * di) + self_j / (dj * dj) -
                         2.0 * cross / (di * dj));
  return pb;
}

CovariateGapBound covariate_gap_bound(const GraphMatrices& gm,
                                      const Eigen::MatrixXd& X, double sigma2,
                                      const LaplacianPseudoinverse& lstar,
                                      double lambda2, const Eigen::VectorXd& h_i) {
  const int n = gm.n();
  const int m = gm.m();
  if (X.cols() == 0) throw InputError("gap bound requires p >= 1 covariates");

  RhoXbar rx = rho_and_xbar(gm, X, lstar);
  if (rx.rho <= 1e-12) {
    throw InputError("X collinear with network dummies (rho = 0)");
  }

  Eigen::LLT<Eigen::MatrixXd> omega_llt(rx.omega);
  Eigen::VectorXd quad(n);
  for (int v = 0; v < n; ++v) {
    Eigen::VectorXd xb = rx.xbar.row(v).transpose();
    quad[v] = xb.dot(omega_llt.solve(xb));
  }

  CovariateGapBound out;
  out.rho = rx.rho;
  out.bound = (2.0 * sigma2 / rx.rho) *
              ((1.0 - rx.rho) / lambda2 *
                   (gm.d.cwiseProduct(h_i)).cwiseInverse().array() +
               quad.array() / static_cast<double>(m))
                  .matrix();

  // exact gap via the dense star pseudoinverse of B'M_X B
  Eigen::MatrixXd BtX = gm.B.transpose() * X;
  Eigen::MatrixXd XtX = X.transpose() * X;
  Eigen::MatrixXd BMB =
      Eigen::MatrixXd(gm.L) - BtX * XtX.llt().solve(BtX.transpose());
  Eigen::MatrixXd BMB_star = star_pseudoinverse_dense(BMB, gm.d);
  out.exact_gap = sigma2 * (BMB_star.diagonal() - lstar.dense().diagonal());
  return out;
}

MeanZeroBounds meanzero_variance_bounds(const GraphMatrices& gm, double sigma2,
                                        double lambda2, const HarmonicMeans& hm,
                                        const LaplacianPseudoinverse& lstar) {
  const int n = gm.n();
  const double nn = static_cast<double>(n);
  MeanZeroBounds out;

  out.global_upper =
      (sigma2 / lambda2) *
      (gm.d.cwiseInverse().array() * (1.0 + gm.d.array() / (nn * hm.h))).matrix();

  out.lower = ((sigma2 * gm.d.cwiseInverse().array()) * (1.0 - 2.0 / nn) -
               (2.0 * sigma2 / nn) * hm.h_i2.cwiseInverse().array())
                  .matrix();
  out.upper = ((sigma2 * gm.d.cwiseInverse().array()) *
                   (1.0 + (lambda2 * hm.h_i.array()).inverse()) +
               (sigma2 / hm.h) * (2.0 / nn + 1.0 / (lambda2 * hm.H)))
                  .matrix();

  const Eigen::MatrixXd& Ls = lstar.dense();
  Eigen::VectorXd row_means = Ls.rowwise().mean();
  const double grand_mean = row_means.mean();
  // (M_iota L* M_iota)_ii = L*_ii - 2 rowmean_i + grandmean
  out.exact = sigma2 * (Ls.diagonal().array() - 2.0 * row_means.array() + grand_mean);
  return out;
}

Eigen::MatrixXd star_pseudoinverse_dense(const Eigen::MatrixXd& M,
                                         const Eigen::VectorXd& d) {
  const int n = static_cast<int>(d.size());
  const double sum_d = d.sum();
  const double lambda = 1.0 / sum_d;
  Eigen::MatrixXd K = M + lambda * (d * d.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("augmented matrix not positive definite");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return inv.array() - 1.0 / (lambda * sum_d * sum_d);
}

Eigen::VectorXd quadratic_diag_form(const GraphMatrices& gm, const Eigen::VectorXd& s) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(gm.n());
  for (int c = 0; c < gm.B.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(gm.B, c); it; ++it) {
      out[c] += it.value() * it.value() * s[it.row()];
    }
  }
  return out;
}

StandardErrors standard_errors(const GraphMatrices& gm, const FixedEffectFit& fit,
                               SeMode mode, const LaplacianPseudoinverse& lstar,
                               const Eigen::MatrixXd& X) {
  const int n = gm.n();
  const int m = gm.m();
  const int p = static_cast<int>(fit.beta.size());
  StandardErrors out;
  out.mode = mode;

  if (mode == SeMode::homoskedastic) {
    const int dof = m - (n - 1) - p;
    if (dof <= 0) {
      throw InputError("no residual degrees of freedom: m <= n - 1 + p");
    }
    out.sigma2_hat = fit.residuals.squaredNorm() / dof;
    Eigen::VectorXd diag;
    if (p == 0) {
      diag = lstar.diag();
    } else if (X.cols() != p) {
      throw InputError("homoskedastic se with covariates needs the X matrix");
    } else {
      Eigen::MatrixXd BtX = gm.B.transpose() * X;
      Eigen::MatrixXd XtX = X.transpose() * X;
      Eigen::MatrixXd BMB =
          Eigen::MatrixXd(gm.L) - BtX * XtX.llt().solve(BtX.transpose());
      diag = star_pseudoinverse_dense(BMB, gm.d).diagonal();
    }
    out.se = (out.sigma2_hat * diag.cwiseMax(0.0)).cwiseSqrt();
    return out;
  }

  Eigen::VectorXd sq = fit.residuals.array().square();
  if (mode == SeMode::plugin_inid) sq /= static_cast<double>(m);
  Eigen::VectorXd quad = quadratic_diag_form(gm, sq);
  out.se = quad.cwiseSqrt().cwiseQuotient(gm.d);
  return out;
}

Diagnostics diagnostics_from_report(const ConnectivityReport& rep, double sigma2) {
  Eigen::VectorXd diag = rep.diag_Sdag.cwiseQuotient(rep.d);  // (L*)_ii
  Diagnostics out;
  out.sigma2 = sigma2;
  out.sdag_ratio = rep.diag_Sdag;
  out.trace_lstar_over_nm1 = diag.sum() / (rep.n - 1);
  out.h_inv = 1.0 / rep.h;
  out.ci_width_exact = 2.0 * 1.96 * (sigma2 * diag.cwiseMax(0.0)).cwiseSqrt();
  out.ci_width_approx = 2.0 * 1.96 * (sigma2 * rep.d.cwiseInverse()).cwiseSqrt();
  return out;
}

Diagnostics diagnostics(const Graph& g, double sigma2) {
  return diagnostics_from_report(connectivity_report(g), sigma2);
}

}  // namespace netfe
