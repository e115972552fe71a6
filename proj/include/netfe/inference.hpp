#pragma once

#include <Eigen/Core>
#include <optional>

#include "netfe/estimator.hpp"
#include "netfe/graph.hpp"
#include "netfe/spectral.hpp"

namespace netfe {

// The constrained estimator decomposes as
//   alpha_check_i - alpha_i = b_i'u / d_i + eps_i + eps2_i,
// where the remainders are mean zero with second moments bounded by
// sigma^2 (1+rho) / (rho d_i lambda2 h_i) and
// sigma^2 xbar_i' Omega^{-1} xbar_i / (rho m). They are not separately
// computable from data; the statistics below (lambda2 h_i, H_i, rho, ...)
// gauge how much they matter relative to the leading b_i'u/d_i term.

/// Local connectivity statistics.
///   h_i   weighted harmonic mean of neighbor degrees d_j / A_ij,
///   h_i2  the first-order variant with A_ij in place of A_ij^2,
///   H_i   harmonic mean entering the plug-in consistency condition,
///   h     harmonic mean of the degrees, H its global counterpart.
struct HarmonicMeans {
  Eigen::VectorXd h_i;
  Eigen::VectorXd h_i2;
  Eigen::VectorXd H_i;
  double h = 0.0;
  double H = 0.0;
};

HarmonicMeans harmonic_means(const NeighborIndex& nbr, const Eigen::VectorXd& d);

/// Everything the summary tables report, per vertex and globally.
struct ConnectivityReport {
  int n = 0;
  int m = 0;
  double lambda2 = 0.0;
  double h = 0.0;
  double H = 0.0;
  std::optional<double> rho;
  Eigen::VectorXd d;
  Eigen::VectorXd h_i;
  Eigen::VectorXd H_i;
  Eigen::VectorXd h_i2;
  Eigen::VectorXd diag_Sdag;
};

ConnectivityReport connectivity_report(const Graph& g,
                                       const Eigen::MatrixXd& X = Eigen::MatrixXd());

/// Same report with a caller-supplied diag(S^dagger) (e.g. the Hutchinson
/// estimate), skipping the exact pseudoinverse diagonal.
ConnectivityReport connectivity_report_with_diag(const Graph& g,
                                                 const Eigen::VectorXd& diag_Sdag);

/// rho = || (X'X)^{-1} X'M_B X ||_2 in [0,1] (1 = X orthogonal to the network
/// dummies, 0 = collinear), plus xbar_i = X'b_i / d_i stacked row-wise and
/// Omega = X'X/m.
struct RhoXbar {
  double rho = 1.0;
  Eigen::MatrixXd xbar;   // n x p
  Eigen::MatrixXd omega;  // p x p
};

RhoXbar rho_and_xbar(const GraphMatrices& gm, const Eigen::MatrixXd& X,
                     const LaplacianPseudoinverse& lstar);

/// Homoskedastic finite-sample bounds on var(alpha_hat_i):
///   sigma^2/d_i - 2 sigma^2/(iota'd)
///     <= var <= (sigma^2/d_i)(1 + 1/(lambda2 h_i)) - 2 sigma^2/(iota'd).
struct VertexBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double sigma2 = 1.0;
};

VertexBounds variance_bounds(const Eigen::VectorXd& d, const Eigen::VectorXd& h_i,
                             double lambda2, double degree_sum, double sigma2);

/// Bounds on var(alpha_hat_i - alpha_hat_j); the shared-neighborhood term
/// uses d_ij = sum_k A_ik A_jk and the harmonic mean h_ij, with
/// d_ij/h_ij -> 0 when the neighborhoods are disjoint.
struct PairBounds {
  double lower = 0.0;
  double upper = 0.0;
};

PairBounds difference_variance_bounds(const NeighborIndex& nbr,
                                      const Eigen::VectorXd& d, double lambda2,
                                      double sigma2, int i, int j);

/// Bound on |var(alpha_check_i) - var(alpha_hat_i)| when covariates are
/// estimated, plus the exact gap sigma^2 [(B'M_X B)*_ii - (L*)_ii].
struct CovariateGapBound {
  Eigen::VectorXd bound;
  Eigen::VectorXd exact_gap;
  double rho = 1.0;
};

CovariateGapBound covariate_gap_bound(const GraphMatrices& gm,
                                      const Eigen::MatrixXd& X, double sigma2,
                                      const LaplacianPseudoinverse& lstar,
                                      double lambda2, const Eigen::VectorXd& h_i);

/// Bounds for the mean-zero normalization alpha_diamond, with the exact
/// variance sigma^2 (M_iota L* M_iota)_ii returned for verification.
/// global_upper is the lambda2-only bound; (lower, upper) the first-order one.
struct MeanZeroBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd global_upper;
  Eigen::VectorXd exact;
};

MeanZeroBounds meanzero_variance_bounds(const GraphMatrices& gm, double sigma2,
                                        double lambda2, const HarmonicMeans& hm,
                                        const LaplacianPseudoinverse& lstar);

/// The d-weighted star pseudoinverse of a dense PSD matrix with nullvector
/// iota (used for B'M_X B; same construction as L*).
Eigen::MatrixXd star_pseudoinverse_dense(const Eigen::MatrixXd& M,
                                         const Eigen::VectorXd& d);

enum class SeMode { plugin_inid, plugin_unscaled, homoskedastic };

struct StandardErrors {
  Eigen::VectorXd se;
  SeMode mode = SeMode::plugin_unscaled;
  double sigma2_hat = 0.0;  // homoskedastic mode only
};

/// Per-vertex standard errors.
///   plugin_inid      sqrt(b_i' Sigma_check b_i)/d_i, Sigma_check = diag(u u')/m,
///   plugin_unscaled  same with diag(u u') (no /m; default elsewhere),
///   homoskedastic    sigma_hat sqrt((L*)_ii) (or (B'M_X B)*_ii with covariates),
///                    sigma_hat^2 = u'u / (m - (n-1) - p).
StandardErrors standard_errors(const GraphMatrices& gm, const FixedEffectFit& fit,
                               SeMode mode, const LaplacianPseudoinverse& lstar,
                               const Eigen::MatrixXd& X = Eigen::MatrixXd());

/// sum over edges at vertex i of w_e * s_e, for a per-edge vector s; equals
/// b_i' diag(s) b_i.
Eigen::VectorXd quadratic_diag_form(const GraphMatrices& gm, const Eigen::VectorXd& s);

/// The accuracy diagnostics reported for a graph: the per-vertex ratio of
/// exact to first-order variance (S^dagger)_ii, the trace term
/// tr(L*)/(n-1), h^{-1}, and 95% CI widths under both variances.
struct Diagnostics {
  Eigen::VectorXd sdag_ratio;   // (S^dagger)_ii = d_i (L*)_ii
  double trace_lstar_over_nm1 = 0.0;
  double h_inv = 0.0;
  Eigen::VectorXd ci_width_exact;   // 2 * 1.96 * sqrt(sigma^2 (L*)_ii)
  Eigen::VectorXd ci_width_approx;  // 2 * 1.96 * sqrt(sigma^2 / d_i)
  double sigma2 = 1.0;
};

Diagnostics diagnostics(const Graph& g, double sigma2 = 1.0);

/// Diagnostics derived from an already-computed report (no extra solves).
Diagnostics diagnostics_from_report(const ConnectivityReport& rep, double sigma2);

}  // namespace netfe
