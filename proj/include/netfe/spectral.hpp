#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "netfe/graph.hpp"

namespace netfe {

/// S := D^{-1/2} L D^{-1/2}. Requires all degrees positive (apply
/// largest_component first if the graph has isolated vertices).
Eigen::SparseMatrix<double> normalized_laplacian(const GraphMatrices& gm);

struct SpectralSummary {
  double lambda2 = 0.0;
  double lambda_max = 0.0;
  std::optional<double> cheeger;
  double cheeger_lower = 0.0;  // lambda2 / 2, from 2C >= lambda2
  double cheeger_upper = 1.0;  // sqrt(lambda2 (2 - lambda2)) when lambda2 <= 1
};

enum class Lambda2Method { automatic, dense, lanczos };

struct Lambda2Options {
  double tol = 1e-8;
  Lambda2Method method = Lambda2Method::automatic;
  int dense_cutoff = 2000;
  int max_iterations = 400;
  std::uint64_t seed = 1;  // start-vector seed for the iterative path
};

/// Smallest non-zero eigenvalue of S. Dense symmetric eigendecomposition up
/// to the cutoff; above it a Lanczos iteration on S with the known zero
/// eigenvector D^{1/2} iota deflated exactly (only mat-vec products with S
/// are used). Throws NumericalError with the residual on non-convergence.
double lambda2(const GraphMatrices& gm, const Lambda2Options& opts = {});
double lambda2(const Graph& g, const Lambda2Options& opts = {});

/// Largest eigenvalue of S (same solver contract as lambda2).
double lambda_max(const GraphMatrices& gm, const Lambda2Options& opts = {});

SpectralSummary spectral_summary(const Graph& g, const Lambda2Options& opts = {},
                                 bool with_exact_cheeger = false);

/// Exact Cheeger constant by exhaustive enumeration over vertex subsets,
/// C = min cut(U) / vol(U) over 0 < vol(U) <= vol(V \ U). Refuses n > 24.
double cheeger_exact(const Graph& g);

enum class PseudoinverseMethod { dense_solve, dense_eigen, conjugate_gradient };

struct PseudoinverseOptions {
  PseudoinverseMethod method = PseudoinverseMethod::dense_solve;
  int dense_cutoff = 2000;   // automatic switch to CG above this size
  double cg_tol = 1e-12;
  int cg_max_iterations = 20000;
};

/// The d-weighted pseudoinverse L* = D^{-1/2} S^dagger D^{-1/2} of the
/// Laplacian, computed through the augmented linear system
///   L* = (L + lambda d d')^{-1} - lambda^{-1} (iota'd)^{-2} iota iota'
/// with lambda = 1/(iota'd), or through the dense eigendecomposition of S.
/// Above the dense cutoff columns are produced on demand by conjugate
/// gradient on the same augmented operator.
class LaplacianPseudoinverse {
public:
  LaplacianPseudoinverse(const GraphMatrices& gm, const PseudoinverseOptions& opts = {});

  int n() const { return n_; }
  PseudoinverseMethod method() const { return method_; }

  /// Dense L* (materializes it if the CG path was selected; O(n^2) memory).
  const Eigen::MatrixXd& dense() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;    // L* b
  Eigen::MatrixXd apply_matrix(const Eigen::MatrixXd& M) const;  // L* M, columnwise
  Eigen::VectorXd column(int v) const;                      // L* e_v, 1-based v
  double diag_entry(int v) const;
  Eigen::VectorXd diag() const;
  double trace() const;

private:
  Eigen::VectorXd cg_solve(const Eigen::VectorXd& rhs) const;

  int n_ = 0;
  PseudoinverseMethod method_;
  Eigen::SparseMatrix<double> L_;
  Eigen::VectorXd d_;
  double lambda_ = 0.0;      // 1 / (iota'd)
  Eigen::VectorXd precond_;  // Jacobi diagonal of L + lambda dd'
  double cg_tol_;
  int cg_max_iter_;
  mutable std::optional<Eigen::MatrixXd> dense_;
};

struct PseudoinverseBundle {
  std::shared_ptr<LaplacianPseudoinverse> lstar;
  Eigen::VectorXd diag_Sdag;  // (S^dagger)_ii = d_i (L*)_ii
  PseudoinverseMethod method;
};

PseudoinverseBundle pseudoinverse_star(const GraphMatrices& gm,
                                       const PseudoinverseOptions& opts = {});

struct StochasticDiag {
  Eigen::VectorXd value;   // Hutchinson estimate of (S^dagger)_ii
  Eigen::VectorXd stderr_; // per-entry standard error of the estimate
  int probes = 0;
};

/// diag(S^dagger): exact mode walks the columns of L*; stochastic mode is a
/// Hutchinson probe estimator (unbiased, Rademacher probes) intended for
/// n > 1e4. Rejects k_probes < 8.
Eigen::VectorXd diag_Sdag_exact(const GraphMatrices& gm,
                                const PseudoinverseOptions& opts = {});
StochasticDiag diag_Sdag_stochastic(const GraphMatrices& gm, int k_probes,
                                    std::uint64_t seed);

}  // namespace netfe
