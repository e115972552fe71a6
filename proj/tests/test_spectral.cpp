#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "netfe/error.hpp"
#include "netfe/generators.hpp"
#include "netfe/spectral.hpp"
#include "oracles.hpp"

using namespace netfe;

namespace {

Eigen::VectorXd dense_eigenvalues(const GraphMatrices& gm) {
  Eigen::MatrixXd S(normalized_laplacian(gm));
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("K2 normalized Laplacian") {
  GraphMatrices gm = matrices(build_graph({{1, 2, 1.0}}));
  Eigen::MatrixXd S(normalized_laplacian(gm));
  Eigen::MatrixXd expect(2, 2);
  expect << 1, -1, -1, 1;
  CHECK((S - expect).norm() <= 1e-14);
  Eigen::VectorXd ev = dense_eigenvalues(gm);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0));
}

TEST_CASE("star spectrum is {0, 1^(n-2), 2}") {
  for (int n : {4, 8, 13}) {
    Eigen::VectorXd ev = dense_eigenvalues(matrices(star(n)));
    CHECK(std::abs(ev[0]) <= 1e-12);
    CHECK(ev[n - 1] == doctest::Approx(2.0));
    for (int k = 1; k < n - 1; ++k) CHECK(ev[k] == doctest::Approx(1.0));
  }
}

TEST_CASE("nullvector of S is D^(1/2) iota") {
  for (std::uint64_t seed : {3u, 9u}) {
    GraphMatrices gm = matrices(oracles::random_connected_graph(15, 20, seed, true));
    Eigen::SparseMatrix<double> S = normalized_laplacian(gm);
    Eigen::VectorXd psi = gm.d.cwiseSqrt();
    CHECK((S * psi).norm() <= 1e-10 * psi.norm());
    Eigen::VectorXd ev = dense_eigenvalues(gm);
    CHECK(ev.minCoeff() >= -1e-12);
    CHECK(ev.maxCoeff() <= 2.0 + 1e-12);
  }
}

TEST_CASE("isolated vertex is rejected") {
  Graph g = build_graph({{1, 2, 1.0}}, 3);
  CHECK_THROWS_WITH_AS(normalized_laplacian(matrices(g)),
                       doctest::Contains("largest_component"), InputError);
}

TEST_CASE("analytic lambda2 of the synthetic families") {
  CHECK(lambda2(star(8)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lambda2(star(23)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lambda2(hypercube(3)) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(lambda2(hypercube(5)) == doctest::Approx(2.0 / 5.0).epsilon(1e-10));
  CHECK(lambda2(extended_hypercube(3)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lambda2(extended_hypercube(4)) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(lambda2(wheel(8)) ==
        doctest::Approx(1.0 - (2.0 / 3.0) * std::cos(std::numbers::pi / 4))
            .epsilon(1e-10));
}

TEST_CASE("wheel lambda2 formula against the dense solver, rims 3..64") {
  for (int rim = 3; rim <= 64; rim += (rim < 8 ? 1 : 7)) {
    const double formula = std::min(
        4.0 / 3.0, 1.0 - (2.0 / 3.0) * std::cos(2.0 * std::numbers::pi / rim));
    CHECK(lambda2(wheel(rim)) == doctest::Approx(formula).epsilon(1e-8));
    if (rim <= 4) CHECK(formula >= 1.0);
    if (rim > 4) CHECK(formula < 1.0);
  }
}

TEST_CASE("Lanczos path matches the dense path") {
  Lambda2Options dense_opts;
  dense_opts.method = Lambda2Method::dense;
  Lambda2Options lanczos_opts;
  lanczos_opts.method = Lambda2Method::lanczos;
  lanczos_opts.tol = 1e-10;

  for (std::uint64_t seed : {11u, 12u, 13u}) {
    GraphMatrices gm = matrices(oracles::random_connected_graph(60, 120, seed));
    CHECK(lambda2(gm, lanczos_opts) ==
          doctest::Approx(lambda2(gm, dense_opts)).epsilon(1e-8));
    CHECK(lambda_max(gm, lanczos_opts) ==
          doctest::Approx(lambda_max(gm, dense_opts)).epsilon(1e-8));
  }
  // iterative path on the analytic families
  CHECK(lambda2(matrices(hypercube(6)), lanczos_opts) ==
        doctest::Approx(2.0 / 6.0).epsilon(1e-8));
}

TEST_CASE("Lanczos non-convergence carries a residual") {
  Lambda2Options opts;
  opts.method = Lambda2Method::lanczos;
  opts.max_iterations = 2;
  opts.tol = 1e-14;
  GraphMatrices gm = matrices(oracles::random_connected_graph(80, 200, 5));
  CHECK_THROWS_AS((void)lambda2(gm, opts), NumericalError);
}

TEST_CASE("exact Cheeger constants") {
  CHECK(cheeger_exact(build_graph({{1, 2, 1.0}})) == doctest::Approx(1.0));
  // path on 3: the best cut isolates a leaf: weight 1 / volume 1
  CHECK(cheeger_exact(build_graph({{1, 2, 1.0}, {2, 3, 1.0}})) ==
        doctest::Approx(1.0));
  CHECK(cheeger_exact(complete(4)) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_WITH_AS(cheeger_exact(star(25)), doctest::Contains("exponential"),
                       InputError);
}

TEST_CASE("Cheeger chain 2C >= lambda2 >= 1 - sqrt(1-C^2) >= C^2/2") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 4 + static_cast<int>(seed % 9);
    Graph g = oracles::random_connected_graph(n, static_cast<int>(seed % 11),
                                              1000 + seed, seed % 3 == 0);
    const double C = cheeger_exact(g);
    const double l2 = lambda2(g);
    CHECK(2.0 * C >= l2 - 1e-10);
    CHECK(l2 >= 1.0 - std::sqrt(1.0 - C * C) - 1e-10);
    CHECK(1.0 - std::sqrt(1.0 - C * C) >= C * C / 2.0 - 1e-10);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("spectral summary bounds bracket the exact Cheeger constant") {
  Graph g = oracles::random_connected_graph(10, 8, 77);
  SpectralSummary s = spectral_summary(g, {}, /*with_exact_cheeger=*/true);
  REQUIRE(s.cheeger.has_value());
  CHECK(*s.cheeger >= s.cheeger_lower - 1e-12);
  CHECK(*s.cheeger <= s.cheeger_upper + 1e-12);

  Lambda2Options lanczos_opts;
  lanczos_opts.method = Lambda2Method::lanczos;
  SpectralSummary it = spectral_summary(g, lanczos_opts);
  CHECK(it.lambda2 == doctest::Approx(s.lambda2).epsilon(1e-8));
  CHECK(it.lambda_max == doctest::Approx(s.lambda_max).epsilon(1e-8));
}

TEST_CASE("K2 pseudoinverse by hand") {
  GraphMatrices gm = matrices(build_graph({{1, 2, 1.0}}));
  LaplacianPseudoinverse lstar(gm);
  Eigen::MatrixXd expect(2, 2);
  expect << 0.25, -0.25, -0.25, 0.25;
  CHECK((lstar.dense() - expect).norm() <= 1e-12);
}

TEST_CASE("pseudoinverse identities and route agreement") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 6 + static_cast<int>(seed * 3 % 20);
    Graph g = oracles::random_connected_graph(n, 2 * n, seed, seed % 2 == 1);
    GraphMatrices gm = matrices(g);

    PseudoinverseOptions solve_opts;  // default linear-solve route
    LaplacianPseudoinverse via_solve(gm, solve_opts);
    PseudoinverseOptions eigen_opts;
    eigen_opts.method = PseudoinverseMethod::dense_eigen;
    LaplacianPseudoinverse via_eigen(gm, eigen_opts);
    PseudoinverseOptions cg_opts;
    cg_opts.method = PseudoinverseMethod::conjugate_gradient;
    LaplacianPseudoinverse via_cg(gm, cg_opts);

    Eigen::MatrixXd Ls = via_solve.dense();
    CHECK((Ls - via_eigen.dense()).norm() <= 1e-8 * std::max(1.0, Ls.norm()));
    CHECK((Ls - via_cg.dense()).norm() <= 1e-8 * std::max(1.0, Ls.norm()));

    Eigen::MatrixXd L(gm.L);
    CHECK((L * Ls * L - L).norm() <= 1e-8 * L.norm());
    CHECK((Ls * L * Ls - Ls).norm() <= 1e-8 * Ls.norm());
    CHECK((Ls * gm.d).cwiseAbs().maxCoeff() <= 1e-10);

    // L* = D^{-1/2} S^dagger D^{-1/2} entrywise against the eigen oracle
    Eigen::MatrixXd oracle = oracles::lstar_dense(gm);
    CHECK((Ls - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));

    // PSD order: 0 <= L* <= lambda2^{-1} D^{-1}
    const double l2 = lambda2(gm);
    Eigen::MatrixXd gap =
        Eigen::MatrixXd(gm.d.cwiseInverse().asDiagonal()) / l2 - Ls;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_gap(gap, Eigen::EigenvaluesOnly);
    CHECK(es_gap.eigenvalues().minCoeff() >= -1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_ls(Ls, Eigen::EigenvaluesOnly);
    CHECK(es_ls.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("diagonal ratio (S^dagger)_ii = d_i (L*)_ii") {
  Graph g = star(8);
  GraphMatrices gm = matrices(g);
  PseudoinverseBundle bundle = pseudoinverse_star(gm);
  Eigen::VectorXd sdag_oracle = oracles::sdag_dense(gm).diagonal();
  CHECK((bundle.diag_Sdag - sdag_oracle).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(bundle.lstar->dense()(0, 0) ==
        doctest::Approx(bundle.diag_Sdag[0] / 7.0).epsilon(1e-10));
}

TEST_CASE("complete-graph diagonal is constant by symmetry") {
  Eigen::VectorXd diag = diag_Sdag_exact(matrices(complete(4)));
  for (int v = 1; v < 4; ++v) CHECK(diag[v] == doctest::Approx(diag[0]).epsilon(1e-12));
}

TEST_CASE("star diagonal: leaves above the center") {
  Eigen::VectorXd diag = diag_Sdag_exact(matrices(star(8)));
  CHECK(diag[0] == doctest::Approx(0.25).epsilon(1e-10));
  for (int v = 1; v < 8; ++v) CHECK(diag[v] > diag[0]);
}

TEST_CASE("stochastic diagonal agrees with exact within reported errors") {
  Graph g = oracles::random_connected_graph(200, 500, 321);
  GraphMatrices gm = matrices(g);
  Eigen::VectorXd exact = diag_Sdag_exact(gm);
  StochasticDiag est = diag_Sdag_stochastic(gm, 512, 21);
  Eigen::VectorXd z = (est.value - exact).cwiseQuotient(est.stderr_);
  CHECK(z.cwiseAbs().maxCoeff() <= 3.0);
}

TEST_CASE("stochastic diagonal rejects tiny probe counts") {
  GraphMatrices gm = matrices(star(5));
  CHECK_THROWS_AS(diag_Sdag_stochastic(gm, 4, 1), InputError);
}

TEST_SUITE_END();
