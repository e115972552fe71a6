#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>

#include "netfe/graph.hpp"
#include "netfe/spectral.hpp"

namespace netfe {

enum class Normalization { d_weighted, mean_zero };

struct RankReport {
  bool x_full_rank = true;
  bool joint_full_rank = true;
  bool connected = true;
  int deficiency = 0;  // rank shortfall of (X, B) below p + n - 1
};

/// Result of the constrained least-squares fit. alpha satisfies d'alpha = 0
/// (d-weighted mode) or iota'alpha = 0 (mean-zero mode).
struct FixedEffectFit {
  Eigen::VectorXd alpha;      // n vertex effects
  Eigen::VectorXd beta;       // p slopes (size 0 when no covariates)
  Eigen::VectorXd residuals;  // m
  Normalization normalization = Normalization::d_weighted;
  RankReport rank_report;
};

/// alpha_hat = L* B' z for z = y - X beta with beta known. d'alpha_hat = 0.
Eigen::VectorXd fit_alpha_known_beta(const GraphMatrices& gm,
                                     const Eigen::VectorXd& z,
                                     const LaplacianPseudoinverse& lstar);
Eigen::VectorXd fit_alpha_known_beta(const Graph& g, const Eigen::VectorXd& z);

/// Joint constrained least squares of y on (B, X) under d'alpha = 0.
/// beta_check = (X'M_B X)^{-1} X'M_B y is computed first, then
/// alpha_check = L* B'(y - X beta_check); the pair is the unique minimizer
/// when rank(X) = p and rank((X,B)) = p + n - 1.
FixedEffectFit fit_full(const Graph& g, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& X = Eigen::MatrixXd());
FixedEffectFit fit_full(const GraphMatrices& gm, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& X,
                        const LaplacianPseudoinverse& lstar);

/// Mean-zero renormalization: alpha_diamond = alpha - mean(alpha). Levels
/// move, differences alpha_i - alpha_j are untouched.
FixedEffectFit fit_alternative_normalization(const FixedEffectFit& fit);

/// Rank checks via thin column-pivoted QR, threshold 1e-10 x max column norm.
RankReport check_rank_conditions(const GraphMatrices& gm, const Eigen::MatrixXd& X,
                                 const LaplacianPseudoinverse& lstar,
                                 bool connected);

}  // namespace netfe
