#include "netfe/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "netfe/error.hpp"
#include "netfe/parallel.hpp"
#include "netfe/rng.hpp"

namespace netfe {

Eigen::SparseMatrix<double> normalized_laplacian(const GraphMatrices& gm) {
  const int n = gm.n();
  for (int v = 0; v < n; ++v) {
    if (!(gm.d[v] > 0.0)) {
      throw InputError("isolated vertex " + std::to_string(v + 1) +
                       " (degree 0): apply largest_component first");
    }
  }
  Eigen::VectorXd dinv_sqrt = gm.d.cwiseSqrt().cwiseInverse();
  Eigen::SparseMatrix<double> S =
      dinv_sqrt.asDiagonal() * gm.L * dinv_sqrt.asDiagonal();
  return S;
}

namespace {

Eigen::VectorXd dense_spectrum(const GraphMatrices& gm) {
  Eigen::MatrixXd S = Eigen::MatrixXd(normalized_laplacian(gm));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("dense eigendecomposition of S failed");
  }
  return es.eigenvalues();
}

// Lanczos with full reorthogonalization on S, restricted to the orthogonal
// complement of psi = D^{1/2} iota (the known zero eigenvector). Returns the
// extremal Ritz value: smallest if `smallest`, else largest.
double lanczos_extremal(const GraphMatrices& gm, bool smallest,
                        const Lambda2Options& opts) {
  const int n = gm.n();
  const Eigen::SparseMatrix<double> S = normalized_laplacian(gm);
  Eigen::VectorXd psi = gm.d.cwiseSqrt();
  psi.normalize();

  const int max_k = std::min(n - 1, opts.max_iterations);
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(max_k);
  std::vector<double> alpha, beta;

  CounterRng rng(opts.seed, 0x1a2c);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  v -= psi * psi.dot(v);
  double nv = v.norm();
  if (nv < 1e-14) throw NumericalError("degenerate Lanczos start vector");
  v /= nv;

  double ritz = 0.0, residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_k; ++k) {
    basis.push_back(v);
    Eigen::VectorXd w = S * v;
    const double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (k > 0) w -= beta.back() * basis[k - 1];
    // exact deflation + full reorthogonalization
    w -= psi * psi.dot(w);
    for (const auto& q : basis) w -= q * q.dot(w);
    const double b = w.norm();

    // tridiagonal Ritz values
    const int kk = k + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(kk, kk);
    for (int t = 0; t < kk; ++t) T(t, t) = alpha[t];
    for (int t = 0; t + 1 < kk; ++t) T(t, t + 1) = T(t + 1, t) = beta[t];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const int idx = smallest ? 0 : kk - 1;
    ritz = es.eigenvalues()[idx];
    residual = b * std::abs(es.eigenvectors()(kk - 1, idx));
    if (residual <= opts.tol) return ritz;

    if (b < 1e-14) {
      // Krylov space exhausted: Ritz values are exact on the deflated space.
      return ritz;
    }
    beta.push_back(b);
    v = w / b;
  }
  throw NumericalError("Lanczos did not converge within " +
                           std::to_string(max_k) + " iterations",
                       residual);
}

}  // namespace

double lambda2(const GraphMatrices& gm, const Lambda2Options& opts) {
  const int n = gm.n();
  Lambda2Method method = opts.method;
  if (method == Lambda2Method::automatic) {
    method = n <= opts.dense_cutoff ? Lambda2Method::dense : Lambda2Method::lanczos;
  }
  if (method == Lambda2Method::dense) {
    Eigen::VectorXd ev = dense_spectrum(gm);
    return ev[1];
  }
  return lanczos_extremal(gm, /*smallest=*/true, opts);
}

double lambda2(const Graph& g, const Lambda2Options& opts) {
  if (!is_connected(g)) {
    throw InputError("lambda2 requires a connected graph; apply largest_component");
  }
  return lambda2(matrices(g), opts);
}

double lambda_max(const GraphMatrices& gm, const Lambda2Options& opts) {
  const int n = gm.n();
  Lambda2Method method = opts.method;
  if (method == Lambda2Method::automatic) {
    method = n <= opts.dense_cutoff ? Lambda2Method::dense : Lambda2Method::lanczos;
  }
  if (method == Lambda2Method::dense) {
    Eigen::VectorXd ev = dense_spectrum(gm);
    return ev[ev.size() - 1];
  }
  return lanczos_extremal(gm, /*smallest=*/false, opts);
}

double cheeger_exact(const Graph& g) {
  const int n = g.vertex_count();
  if (n > 24) {
    throw InputError("exact Cheeger exponential; use lambda2 bounds for n > 24");
  }
  if (!is_connected(g)) {
    throw InputError("Cheeger constant requires a connected graph");
  }
  if (n < 2) throw InputError("Cheeger constant needs at least two vertices");

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (const Edge& e : g.edges()) {
    A(e.i - 1, e.j - 1) += e.w;
    A(e.j - 1, e.i - 1) += e.w;
    d[e.i - 1] += e.w;
    d[e.j - 1] += e.w;
  }
  const double total_vol = d.sum();

  // Gray-code walk over all subsets; cut and volume maintained incrementally.
  std::vector<char> in(n, 0);
  double vol = 0.0, cut = 0.0, best = std::numeric_limits<double>::infinity();
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < limit; ++k) {
    const int v = static_cast<int>(std::countr_zero(k));  // flipped vertex
    double cross = 0.0;  // weight between v and the current subset
    for (int u = 0; u < n; ++u) {
      if (in[u]) cross += A(v, u);
    }
    if (!in[v]) {
      in[v] = 1;
      vol += d[v];
      cut += d[v] - 2.0 * cross;
    } else {
      in[v] = 0;
      vol -= d[v];
      cut -= d[v] - 2.0 * cross;
    }
    if (vol > 0.0 && vol <= total_vol - vol) {
      best = std::min(best, cut / vol);
    }
  }
  return best;
}

SpectralSummary spectral_summary(const Graph& g, const Lambda2Options& opts,
                                 bool with_exact_cheeger) {
  GraphMatrices gm = matrices(g);
  SpectralSummary s;
  if (g.vertex_count() <= opts.dense_cutoff &&
      opts.method != Lambda2Method::lanczos) {
    Eigen::VectorXd ev = dense_spectrum(gm);
    s.lambda2 = ev[1];
    s.lambda_max = ev[ev.size() - 1];
  } else {
    s.lambda2 = lambda2(gm, opts);
    s.lambda_max = lambda_max(gm, opts);
  }
  s.cheeger_lower = s.lambda2 / 2.0;
  s.cheeger_upper =
      s.lambda2 <= 1.0 ? std::sqrt(s.lambda2 * (2.0 - s.lambda2)) : 1.0;
  if (with_exact_cheeger) s.cheeger = cheeger_exact(g);
  return s;
}

LaplacianPseudoinverse::LaplacianPseudoinverse(const GraphMatrices& gm,
                                               const PseudoinverseOptions& opts)
    : n_(gm.n()),
      method_(opts.method),
      L_(gm.L),
      d_(gm.d),
      cg_tol_(opts.cg_tol),
      cg_max_iter_(opts.cg_max_iterations) {
  for (int v = 0; v < n_; ++v) {
    if (!(d_[v] > 0.0)) {
      throw InputError("isolated vertex " + std::to_string(v + 1) +
                       ": apply largest_component first");
    }
  }
  lambda_ = 1.0 / d_.sum();
  precond_ = (d_.array() + lambda_ * d_.array().square()).inverse();

  if (method_ != PseudoinverseMethod::conjugate_gradient && n_ > opts.dense_cutoff) {
    method_ = PseudoinverseMethod::conjugate_gradient;
  }

  if (method_ == PseudoinverseMethod::dense_solve) {
    // L* = (L + lambda dd')^{-1} - lambda^{-1} (iota'd)^{-2} iota iota'
    Eigen::MatrixXd K = Eigen::MatrixXd(L_) + lambda_ * (d_ * d_.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "augmented Laplacian not positive definite: graph disconnected?");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n_, n_));
    const double sum_d = d_.sum();
    const double shift = 1.0 / (lambda_ * sum_d * sum_d);  // = 1 / (iota'd)
    dense_ = inv.array() - shift;
  } else if (method_ == PseudoinverseMethod::dense_eigen) {
    Eigen::MatrixXd S = Eigen::MatrixXd(normalized_laplacian(gm));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) {
      throw NumericalError("dense eigendecomposition of S failed");
    }
    Eigen::VectorXd inv_ev = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(1.0, inv_ev[inv_ev.size() - 1]);
    for (int i = 0; i < inv_ev.size(); ++i) {
      inv_ev[i] = inv_ev[i] > cutoff ? 1.0 / inv_ev[i] : 0.0;
    }
    Eigen::MatrixXd Sdag = es.eigenvectors() * inv_ev.asDiagonal() *
                           es.eigenvectors().transpose();
    Eigen::VectorXd dis = d_.cwiseSqrt().cwiseInverse();
    dense_ = dis.asDiagonal() * Sdag * dis.asDiagonal();
  }
}

Eigen::VectorXd LaplacianPseudoinverse::cg_solve(const Eigen::VectorXd& rhs) const {
  // CG on K x = rhs with K = L + lambda dd' (PD for connected graphs),
  // Jacobi preconditioner.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = precond_.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double stop = cg_tol_ * cg_tol_ * rhs.squaredNorm();
  for (int it = 0; it < cg_max_iter_; ++it) {
    if (r.squaredNorm() <= stop) return x;
    Eigen::VectorXd Kp = L_ * p + (lambda_ * d_.dot(p)) * d_;
    const double a = rz / p.dot(Kp);
    x += a * p;
    r -= a * Kp;
    z = precond_.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (r.norm() > 1e-6 * std::max(1.0, rhs.norm())) {
    throw NumericalError("CG on augmented Laplacian did not converge", r.norm());
  }
  return x;
}

const Eigen::MatrixXd& LaplacianPseudoinverse::dense() const {
  if (!dense_) {
    Eigen::MatrixXd out(n_, n_);
    const double shift = 1.0 / d_.sum();
    for (int v = 0; v < n_; ++v) {
      Eigen::VectorXd x = cg_solve(Eigen::VectorXd::Unit(n_, v));
      out.col(v) = x.array() - shift;
    }
    dense_ = 0.5 * (out + out.transpose());  // symmetrize CG noise
  }
  return *dense_;
}

Eigen::VectorXd LaplacianPseudoinverse::apply(const Eigen::VectorXd& b) const {
  if (dense_) return (*dense_) * b;
  Eigen::VectorXd x = cg_solve(b);
  const double shift = b.sum() / d_.sum();
  return x.array() - shift;
}

Eigen::MatrixXd LaplacianPseudoinverse::apply_matrix(const Eigen::MatrixXd& M) const {
  if (dense_) return (*dense_) * M;
  Eigen::MatrixXd out(n_, M.cols());
  for (int c = 0; c < M.cols(); ++c) out.col(c) = apply(M.col(c));
  return out;
}

Eigen::VectorXd LaplacianPseudoinverse::column(int v) const {
  if (dense_) return dense_->col(v - 1);
  return apply(Eigen::VectorXd::Unit(n_, v - 1));
}

double LaplacianPseudoinverse::diag_entry(int v) const {
  if (dense_) return (*dense_)(v - 1, v - 1);
  return column(v)[v - 1];
}

Eigen::VectorXd LaplacianPseudoinverse::diag() const {
  if (dense_) return dense_->diagonal();
  Eigen::VectorXd out(n_);
  parallel_for(static_cast<std::size_t>(n_),
               [&](std::size_t v) { out[v] = diag_entry(static_cast<int>(v) + 1); });
  return out;
}

double LaplacianPseudoinverse::trace() const { return diag().sum(); }

PseudoinverseBundle pseudoinverse_star(const GraphMatrices& gm,
                                       const PseudoinverseOptions& opts) {
  PseudoinverseBundle b;
  b.lstar = std::make_shared<LaplacianPseudoinverse>(gm, opts);
  b.method = b.lstar->method();
  b.diag_Sdag = gm.d.cwiseProduct(b.lstar->diag());
  return b;
}

Eigen::VectorXd diag_Sdag_exact(const GraphMatrices& gm,
                                const PseudoinverseOptions& opts) {
  LaplacianPseudoinverse lstar(gm, opts);
  return gm.d.cwiseProduct(lstar.diag());
}

StochasticDiag diag_Sdag_stochastic(const GraphMatrices& gm, int k_probes,
                                    std::uint64_t seed) {
  if (k_probes < 8) throw InputError("stochastic diagonal needs k_probes >= 8");
  const int n = gm.n();
  PseudoinverseOptions opts;
  opts.method = PseudoinverseMethod::conjugate_gradient;
  LaplacianPseudoinverse lstar(gm, opts);
  const Eigen::VectorXd sqrt_d = gm.d.cwiseSqrt();

  // S^dagger z = D^{1/2} L* D^{1/2} z; Rademacher probes give an unbiased
  // per-entry estimate of the diagonal. Per-probe seeds are derived, so the
  // result is independent of the parallel schedule.
  Eigen::MatrixXd samples(n, k_probes);
  parallel_for(static_cast<std::size_t>(k_probes), [&](std::size_t k) {
    CounterRng rng(seed, 0x5d1a0000ULL + k);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
    Eigen::VectorXd Mz = sqrt_d.cwiseProduct(lstar.apply(sqrt_d.cwiseProduct(z)));
    samples.col(static_cast<int>(k)) = z.cwiseProduct(Mz);
  });

  StochasticDiag out;
  out.probes = k_probes;
  out.value = samples.rowwise().mean();
  Eigen::VectorXd var = (samples.colwise() - out.value)
                            .array()
                            .square()
                            .rowwise()
                            .sum() /
                        static_cast<double>(k_probes - 1);
  out.stderr_ = (var / static_cast<double>(k_probes)).cwiseSqrt();
  return out;
}

}  // namespace netfe
