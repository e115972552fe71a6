#include <doctest.h>

#include <Eigen/Dense>

#include <cstdio>

#include "netfe/bipartite.hpp"
#include "netfe/csv.hpp"
#include "netfe/error.hpp"
#include "netfe/estimator.hpp"
#include "netfe/generators.hpp"
#include "netfe/rng.hpp"
#include "netfe/two_way.hpp"
#include "oracles.hpp"

using namespace netfe;

namespace {

// random connected bipartite panel; outcomes from a planted (mu, eta, beta)
BipartiteData random_fixture(int n1, int n2, int rows_per_unit, std::uint64_t seed,
                             int p, double noise) {
  CounterRng rng(seed, 0xb17);
  std::vector<MatchedRow> rows;
  for (int i = 1; i <= n1; ++i) {
    // vary the panel length so the first-difference weights are not constant
    const int n_rows = rows_per_unit + i % 3;
    for (int k = 0; k < n_rows; ++k) {
      MatchedRow row;
      row.i = "s" + std::to_string(i);
      // force a connected skeleton: first row links consecutive type-2 ids
      const int j = k == 0 ? 1 + (i - 1) % n2 : 1 + static_cast<int>(rng.below(n2));
      row.j = "t" + std::to_string(j);
      for (int c = 0; c < p; ++c) row.x.push_back(rng.normal());
      rows.push_back(row);
    }
  }
  // outcomes from planted parameters
  std::vector<double> mu(n1), eta(n2), beta(p);
  for (auto& v : mu) v = rng.normal();
  for (auto& v : eta) v = rng.normal();
  for (auto& v : beta) v = rng.normal();
  for (auto& row : rows) {
    const int i = std::stoi(row.i.substr(1)), j = std::stoi(row.j.substr(1));
    row.y = mu[i - 1] + eta[j - 1] + noise * rng.normal();
    for (int c = 0; c < p; ++c) row.y += beta[c] * row.x[c];
  }
  return BipartiteData(rows);
}

Eigen::MatrixXd m_b1(const BipartiteData& bd) {
  Eigen::MatrixXd B1(bd.B1());
  Eigen::VectorXd d1 = bd.degrees1();
  return Eigen::MatrixXd::Identity(bd.m(), bd.m()) -
         B1 * d1.cwiseInverse().asDiagonal() * B1.transpose();
}

}  // namespace

TEST_SUITE_BEGIN("bipartite_projection");

TEST_CASE("basic construction") {
  BipartiteData bd({{"s1", "a", 1.0, {}}, {"s1", "b", 2.0, {}}});
  CHECK(bd.n1() == 1);
  CHECK(bd.n2() == 2);
  CHECK(bd.m() == 2);
  CHECK(bd.p() == 0);
}

TEST_CASE("panel rows stay distinct edges") {
  BipartiteData bd({{"s1", "a", 1.0, {}}, {"s1", "a", 2.0, {}}});
  CHECK(bd.m() == 2);
  Eigen::MatrixXd B2(bd.B2());
  CHECK(B2.col(0).sum() == doctest::Approx(2.0));
}

TEST_CASE("covariates keep their shape") {
  BipartiteData bd({{"s1", "a", 1.0, {1.0, 2.0}},
                    {"s1", "b", 2.0, {0.0, 1.0}},
                    {"s2", "a", 0.0, {3.0, -1.0}}});
  CHECK(bd.X().rows() == 3);
  CHECK(bd.X().cols() == 2);
  CHECK_THROWS_AS(BipartiteData({{"s1", "a", 1.0, {1.0}}, {"s1", "b", 0.0, {}}}),
                  InputError);
}

TEST_CASE("type namespaces never collide") {
  BipartiteData bd({{"x", "x", 1.0, {}}});
  CHECK(bd.n1() == 1);
  CHECK(bd.n2() == 1);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(BipartiteData({}), InputError);
}

TEST_CASE("stacked graph is (B1, -B2)") {
  BipartiteData bd({{"s1", "a", 1.0, {}}, {"s1", "b", 2.0, {}}});
  StackedTwoWay stacked = stack_two_way(bd);
  CHECK(stacked.graph.vertex_count() == 3);
  CHECK(stacked.graph.edge_count() == 2);

  GraphMatrices gm = matrices(stacked.graph);
  Eigen::MatrixXd B(gm.B), B1(bd.B1()), B2(bd.B2());
  Eigen::MatrixXd expected(bd.m(), 3);
  expected << B1, -B2;
  CHECK((B - expected).norm() == 0.0);
  CHECK((B * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sign map recovers eta from noiseless data") {
  BipartiteData bd = random_fixture(4, 3, 3, 5, 0, 0.0);
  StackedTwoWay stacked = stack_two_way(bd);
  REQUIRE(is_connected(stacked.graph));
  FixedEffectFit fit = fit_full(stacked.graph, bd.y());
  Eigen::VectorXd eta_hat = -fit.alpha.tail(bd.n2());
  // y = B1 mu + B2 eta reproduced exactly through the sign map
  Eigen::VectorXd fitted = Eigen::MatrixXd(bd.B1()) * fit.alpha.head(bd.n1()) +
                           Eigen::MatrixXd(bd.B2()) * eta_hat;
  CHECK((bd.y() - fitted).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("single student with two teachers projects to weight 1/2") {
  BipartiteData bd({{"s1", "t1", 0.0, {}}, {"s1", "t2", 0.0, {}}});
  Projection proj = one_mode_projection(bd);
  CHECK(proj.m_prime == 1);
  REQUIRE(proj.graph.edge_count() == 1);
  CHECK(proj.graph.edges()[0].w == doctest::Approx(0.5));
  CHECK(proj.connector == std::vector<int>{1});
}

TEST_CASE("m' counts all pairs at each connector") {
  // student degrees (3, 2) -> m' = 3 + 1 = 4
  BipartiteData bd({{"s1", "a", 0, {}},
                    {"s1", "b", 0, {}},
                    {"s1", "c", 0, {}},
                    {"s2", "a", 0, {}},
                    {"s2", "b", 0, {}}});
  Projection proj = one_mode_projection(bd);
  CHECK(proj.m_prime == 4);
}

TEST_CASE("degree-1 students contribute no pairs") {
  BipartiteData bd({{"s1", "a", 0, {}}, {"s2", "b", 0, {}}});
  Projection proj = one_mode_projection(bd);
  CHECK(proj.m_prime == 0);
  CHECK(proj.graph.edge_count() == 0);
}

TEST_CASE("within-teacher pairs give retained all-zero QB2 rows") {
  BipartiteData bd({{"s1", "a", 0, {}}, {"s1", "a", 0, {}}, {"s1", "b", 0, {}}});
  Projection proj = one_mode_projection(bd);
  CHECK(proj.m_prime == 3);  // pairs (1,2), (1,3), (2,3)
  Eigen::MatrixXd QB2 = Eigen::MatrixXd(proj.Q) * Eigen::MatrixXd(bd.B2());
  CHECK(QB2.row(0).cwiseAbs().maxCoeff() == 0.0);  // the (a,a) pair
  CHECK(QB2.row(1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("q_and_w returns the pairing of the projection") {
  BipartiteData bd({{"s1", "a", 0, {}}, {"s1", "b", 0, {}}, {"s2", "a", 0, {}}});
  auto [Q, W] = q_and_w(bd);
  REQUIRE(Q.rows() == 1);  // only s1 has a pair
  Eigen::MatrixXd Qd(Q);
  CHECK(Qd(0, 0) == 1.0);   // +1 on the lower-labeled row
  CHECK(Qd(0, 1) == -1.0);
  CHECK(W[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("projection identities on random fixtures") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BipartiteData bd = random_fixture(3 + seed % 6, 3 + (seed / 2) % 5,
                                      2 + seed % 3, seed, 0, 1.0);
    Projection proj = one_mode_projection(bd);
    Eigen::MatrixXd Q(proj.Q), B1(bd.B1()), B2(bd.B2());

    // Q B1 = 0 exactly
    CHECK((Q * B1).cwiseAbs().maxCoeff() == 0.0);

    // Q'W^2Q = M_{B1}
    Eigen::MatrixXd M1 = m_b1(bd);
    Eigen::MatrixXd QW2Q =
        Q.transpose() * proj.W.array().square().matrix().asDiagonal() * Q;
    CHECK((QW2Q - M1).cwiseAbs().maxCoeff() <= 1e-10);

    // L' = B2' M_{B1} B2 equals the Laplacian of the projected graph
    Eigen::MatrixXd Lp = B2.transpose() * M1 * B2;
    GraphMatrices pm = matrices(proj.graph);
    CHECK((Eigen::MatrixXd(pm.L) - Lp).cwiseAbs().maxCoeff() <= 1e-10);

    // closed-form A' matches the off-diagonals of B2' P_{B1} B2
    Eigen::MatrixXd Ap(projected_adjacency(bd));
    Eigen::MatrixXd P = B2.transpose() * (Eigen::MatrixXd::Identity(bd.m(), bd.m()) - M1) * B2;
    P.diagonal().setZero();
    CHECK((Ap - P).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(Ap.diagonal().cwiseAbs().maxCoeff() == 0.0);

    // connected bipartite data projects to a connected graph of rank n2 - 1
    if (is_connected(stack_two_way(bd).graph)) {
      CHECK(is_connected(proj.graph));
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Lp);
      lu.setThreshold(1e-9);
      CHECK(lu.rank() == bd.n2() - 1);
    }
  }
}

TEST_CASE("matched CSV round trip preserves the fixture") {
  BipartiteData bd = random_fixture(4, 3, 2, 77, 2, 0.5);
  const char* path = "netfe_test_matched.csv";
  write_matched_csv(path, bd);
  MatchedCsv back = read_matched_csv(path);
  BipartiteData bd2(back.rows);
  REQUIRE(bd2.m() == bd.m());
  CHECK(bd2.n1() == bd.n1());
  CHECK(bd2.n2() == bd.n2());
  CHECK((bd2.y() - bd.y()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((bd2.X() - bd.X()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd L1 = Eigen::MatrixXd(matrices(stack_two_way(bd).graph).L);
  Eigen::MatrixXd L2 = Eigen::MatrixXd(matrices(stack_two_way(bd2).graph).L);
  CHECK((L1 - L2).norm() == 0.0);
  std::remove(path);
}

TEST_CASE("three estimation routes agree; plain differences do not") {
  int plain_differs = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int p = static_cast<int>(seed % 3);
    BipartiteData bd = random_fixture(4 + seed % 5, 3 + seed % 4, 3, 100 + seed,
                                      p, 0.7);
    if (!is_connected(stack_two_way(bd).graph)) continue;
    EtaRoutes routes = fit_eta_three_ways(bd);
    CHECK((routes.joint - routes.profiled).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((routes.joint - routes.weighted_fd).cwiseAbs().maxCoeff() <= 1e-8);

    Eigen::VectorXd plain = fit_eta_plain_fd(bd);
    if ((plain - routes.joint).cwiseAbs().maxCoeff() > 1e-6) ++plain_differs;
  }
  CHECK(plain_differs >= 1);
}

TEST_CASE("noiseless two-way data recovers eta exactly") {
  BipartiteData bd = random_fixture(5, 4, 3, 900, 2, 0.0);
  REQUIRE(is_connected(stack_two_way(bd).graph));
  EtaRoutes routes = fit_eta_three_ways(bd);
  // all three must agree and reproduce the outcomes exactly
  CHECK((routes.joint - routes.profiled).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((routes.joint - routes.weighted_fd).cwiseAbs().maxCoeff() <= 1e-10);
  Eigen::VectorXd fitted = Eigen::MatrixXd(bd.B1()) * routes.mu_joint -
                           Eigen::MatrixXd(bd.B2()) * (-routes.joint);
  // mu_joint carries the level difference; compare through residuals instead
  StackedTwoWay stacked = stack_two_way(bd);
  FixedEffectFit fit = fit_full(stacked.graph, bd.y(), bd.X());
  CHECK(fit.residuals.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_SUITE_END();
