#include "netfe/two_way.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "netfe/error.hpp"

namespace netfe {

namespace {

// Solve the normal equations N v = r where N = Z'Z is singular exactly along
// w = (iota_{n2}, 0): the rank-one augmented system (N + c ww') v = r has the
// same solution because r is orthogonal to w, and that solution satisfies
// w'v = 0, i.e. eta comes out mean-zero.
Eigen::VectorXd solve_eta_system(const Eigen::MatrixXd& N, const Eigen::VectorXd& r,
                                 int n2) {
  const int dim = static_cast<int>(N.rows());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  w.head(n2).setOnes();
  const double c = std::max(N.trace() / dim, 1e-12);
  Eigen::MatrixXd Naug = N + c * (w * w.transpose());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Naug);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("two-way normal equations not positive definite");
  }
  Eigen::VectorXd v = ldlt.solve(r);
  const double rel_err = (Naug * v - r).norm() / std::max(r.norm(), 1e-300);
  if (rel_err > 1e-8) {
    throw NumericalError("two-way normal equations ill-conditioned", rel_err);
  }
  return v;
}

Eigen::VectorXd mean_zero(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

// eta (mean-zero) and beta from least squares of t against [G2, Xt] where the
// design's only nullspace direction is the eta level.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ls_eta_beta(
    const Eigen::SparseMatrix<double>& G2, const Eigen::MatrixXd& Xt,
    const Eigen::VectorXd& t) {
  const int n2 = static_cast<int>(G2.cols());
  const int p = static_cast<int>(Xt.cols());
  Eigen::MatrixXd N(n2 + p, n2 + p);
  N.topLeftCorner(n2, n2) = Eigen::MatrixXd(G2.transpose() * G2);
  if (p > 0) {
    Eigen::MatrixXd G2tX = G2.transpose() * Xt;
    N.topRightCorner(n2, p) = G2tX;
    N.bottomLeftCorner(p, n2) = G2tX.transpose();
    N.bottomRightCorner(p, p) = Xt.transpose() * Xt;
  }
  Eigen::VectorXd r(n2 + p);
  r.head(n2) = G2.transpose() * t;
  if (p > 0) r.tail(p) = Xt.transpose() * t;

  Eigen::VectorXd v = solve_eta_system(N, r, n2);
  return {mean_zero(v.head(n2)), v.tail(p)};
}

}  // namespace

EtaRoutes fit_eta_three_ways(const BipartiteData& bd) {
  EtaRoutes out;
  const int n1 = bd.n1(), n2 = bd.n2(), m = bd.m();

  // (a) joint estimation on the stacked graph, eta_j = -alpha_{n1+j}
  StackedTwoWay stacked = stack_two_way(bd);
  if (!is_connected(stacked.graph)) {
    throw InputError("bipartite data not connected: fit on largest_component");
  }
  FixedEffectFit fit = fit_full(stacked.graph, bd.y(), bd.X());
  out.beta = fit.beta;
  out.mu_joint = fit.alpha.head(n1);
  out.joint = mean_zero(-fit.alpha.tail(n2));

  // (b) profiled equation: M1 y = (M1 B2) eta + (M1 X) beta + ...
  // with M1 = I - B1 (B1'B1)^{-1} B1' (B1'B1 diagonal, nonsingular here).
  Eigen::SparseMatrix<double> B1 = bd.B1(), B2 = bd.B2();
  Eigen::VectorXd d1 = bd.degrees1();
  auto apply_M1 = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd g = B1.transpose() * v;
    g.array() /= d1.array();
    return v - B1 * g;
  };
  Eigen::MatrixXd M1B2(m, n2);
  for (int c = 0; c < n2; ++c) {
    M1B2.col(c) = apply_M1(Eigen::VectorXd(B2.col(c)));
  }
  Eigen::MatrixXd M1X(m, bd.p());
  for (int c = 0; c < bd.p(); ++c) M1X.col(c) = apply_M1(bd.X().col(c));
  Eigen::VectorXd M1y = apply_M1(bd.y());
  {
    auto [eta, beta] = ls_eta_beta(M1B2.sparseView(), M1X, M1y);
    out.profiled = eta;
  }

  // (c) weighted first differences: W Q y = W Q B2 eta + W Q X beta + ...
  Projection proj = one_mode_projection(bd);
  Eigen::SparseMatrix<double> WQ = proj.W.asDiagonal() * proj.Q;
  Eigen::SparseMatrix<double> WQB2 = WQ * B2;
  Eigen::MatrixXd WQX = WQ * bd.X();
  Eigen::VectorXd WQy = WQ * bd.y();
  {
    auto [eta, beta] = ls_eta_beta(WQB2, WQX, WQy);
    out.weighted_fd = eta;
  }
  return out;
}

Eigen::VectorXd fit_eta_plain_fd(const BipartiteData& bd) {
  Projection proj = one_mode_projection(bd);
  Eigen::SparseMatrix<double> QB2 = proj.Q * bd.B2();
  Eigen::MatrixXd QX = proj.Q * bd.X();
  Eigen::VectorXd Qy = proj.Q * bd.y();
  auto [eta, beta] = [&] {
    const int n2 = bd.n2();
    const int p = static_cast<int>(QX.cols());
    Eigen::MatrixXd N(n2 + p, n2 + p);
    N.topLeftCorner(n2, n2) = Eigen::MatrixXd(QB2.transpose() * QB2);
    if (p > 0) {
      Eigen::MatrixXd c = QB2.transpose() * QX;
      N.topRightCorner(n2, p) = c;
      N.bottomLeftCorner(p, n2) = c.transpose();
      N.bottomRightCorner(p, p) = QX.transpose() * QX;
    }
    Eigen::VectorXd r(n2 + p);
    r.head(n2) = QB2.transpose() * Qy;
    if (p > 0) r.tail(p) = QX.transpose() * Qy;
    Eigen::VectorXd v = solve_eta_system(N, r, n2);
    return std::make_pair(Eigen::VectorXd(v.head(n2)), Eigen::VectorXd(v.tail(p)));
  }();
  return eta.array() - eta.mean();
}

}  // namespace netfe
