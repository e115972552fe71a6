#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>

#include "netfe/error.hpp"
#include "netfe/generators.hpp"
#include "netfe/simulate.hpp"
#include "netfe/spectral.hpp"
#include "oracles.hpp"

using namespace netfe;

TEST_SUITE_BEGIN("generators");

TEST_CASE("family structure") {
  SUBCASE("hypercube") {
    Graph g = hypercube(3);
    CHECK(g.vertex_count() == 8);
    CHECK(g.edge_count() == 12);
    GraphMatrices gm = matrices(g);
    for (int v = 0; v < 8; ++v) CHECK(gm.d[v] == doctest::Approx(3.0));
  }
  SUBCASE("extended hypercube") {
    Graph g = extended_hypercube(3);
    CHECK(g.vertex_count() == 8);
    CHECK(g.edge_count() == 24);  // N(N+1) 2^{N-1} / 2
    GraphMatrices gm = matrices(g);
    for (int v = 0; v < 8; ++v) CHECK(gm.d[v] == doctest::Approx(6.0));
  }
  SUBCASE("star") {
    Graph g = star(8);
    CHECK(g.edge_count() == 7);
    CHECK(matrices(g).d[0] == doctest::Approx(7.0));
  }
  SUBCASE("wheel: hub plus rim cycle") {
    Graph g = wheel(8);
    CHECK(g.vertex_count() == 9);
    CHECK(g.edge_count() == 16);
    GraphMatrices gm = matrices(g);
    CHECK(gm.d[0] == doctest::Approx(8.0));
    for (int v = 1; v < 9; ++v) CHECK(gm.d[v] == doctest::Approx(3.0));
  }
  SUBCASE("parameter floors") {
    CHECK_THROWS_AS(hypercube(0), InputError);
    CHECK_THROWS_AS(star(2), InputError);
    CHECK_THROWS_AS(wheel(2), InputError);
  }
}

TEST_CASE("family spectra match the closed forms") {
  CHECK(lambda2(hypercube(4)) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(lambda2(extended_hypercube(4)) == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(lambda2(star(17)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(lambda2(wheel(4)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(lambda2(wheel(3)) == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("erdos renyi") {
  SUBCASE("p = 1 is the complete graph") {
    Graph g = erdos_renyi(12, 1.0, 3);
    CHECK(g.edge_count() == 66);
  }
  SUBCASE("reproducible under the seed") {
    Graph a = erdos_renyi(40, 0.2, 99);
    Graph b = erdos_renyi(40, 0.2, 99);
    REQUIRE(a.edge_count() == b.edge_count());
    for (int e = 0; e < a.edge_count(); ++e) {
      CHECK(a.edges()[e].i == b.edges()[e].i);
      CHECK(a.edges()[e].j == b.edges()[e].j);
    }
    Graph c = erdos_renyi(40, 0.2, 100);
    CHECK(a.edge_count() != c.edge_count());  // different draw
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(erdos_renyi(1, 0.5, 1), InputError);
    CHECK_THROWS_AS(erdos_renyi(10, 0.0, 1), InputError);
    CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), InputError);
  }
  SUBCASE("well above the threshold lambda2 sits near 1 (consistency check)") {
    // finite-n check with loose tolerances, not a verification of the limit
    const int n = 500;
    Graph g = erdos_renyi(n, 2.0 * std::log(n) / n, 8);
    REQUIRE(is_connected(g));
    const double l2 = lambda2(g);
    CHECK(l2 > 0.2);
    CHECK(l2 < 1.3);
  }
}

TEST_CASE("random bipartite skeletons") {
  SUBCASE("single student stars the projection") {
    BipartiteData bd = random_bipartite(1, 5, 4, 11);
    CHECK(bd.n1() == 1);
    CHECK(bd.m() == 4);
  }
  SUBCASE("degree-1 students give an empty projection") {
    BipartiteData bd = random_bipartite(20, 6, 1, 12);
    Projection proj = one_mode_projection(bd);
    CHECK(proj.m_prime == 0);
    CHECK(proj.graph.edge_count() == 0);
  }
  SUBCASE("two edges per student usually connect the projection") {
    int connected_count = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      BipartiteData bd = random_bipartite(50, 10, 2, 600 + seed);
      Projection proj = one_mode_projection(bd);
      if (proj.graph.vertex_count() > 0 && is_connected(proj.graph)) {
        ++connected_count;
      }
    }
    CHECK(connected_count >= 8);
  }
}

TEST_CASE("alpha draws satisfy the d constraint") {
  GraphMatrices gm = matrices(oracles::random_connected_graph(30, 40, 1, true));
  Eigen::VectorXd a = draw_alpha(gm.d, 7);
  CHECK(std::abs(gm.d.dot(a)) <= 1e-10 * gm.d.norm() * a.norm());
  Eigen::VectorXd b = draw_alpha(gm.d, 7);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // same seed, same draw
}

TEST_CASE("monte carlo stream determinism") {
  Graph g = hypercube(3);
  GraphMatrices gm = matrices(g);
  DGPConfig cfg;
  cfg.graph = g;
  cfg.sigma2 = 1.0;
  cfg.seed = 17;
  MonteCarloStream s1(cfg, gm), s2(cfg, gm);
  CHECK((s1.outcome(5) - s2.outcome(5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.errors(0) - s1.errors(1)).cwiseAbs().maxCoeff() > 0.0);
  // order of access does not matter
  Eigen::VectorXd later = s1.outcome(9);
  Eigen::VectorXd again = s2.outcome(9);
  CHECK((later - again).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero-noise stream recovers alpha every rep") {
  Graph g = complete(6);
  GraphMatrices gm = matrices(g);
  LaplacianPseudoinverse lstar(gm);
  DGPConfig cfg;
  cfg.graph = g;
  cfg.sigma2 = 1e-30;
  cfg.seed = 3;
  MonteCarloStream stream(cfg, gm);
  for (int r = 0; r < 3; ++r) {
    Eigen::VectorXd a = lstar.apply(gm.B.transpose() * stream.outcome(r));
    CHECK((a - stream.dgp().alpha).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("heteroskedastic edge variances follow the shipped rule") {
  Graph g = complete(8);
  GraphMatrices gm = matrices(g);
  DGPConfig cfg;
  cfg.graph = g;
  cfg.errors = ErrorModel::heteroskedastic;
  cfg.seed = 5;
  RealizedDGP dgp = realize_dgp(cfg, gm);
  CHECK(dgp.edge_sd.minCoeff() >= std::sqrt(0.5) - 1e-12);
  RealizedDGP again = realize_dgp(cfg, gm);
  CHECK((dgp.edge_sd - again.edge_sd).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("custom error model takes per-edge sds verbatim") {
  Graph g = star(4);
  GraphMatrices gm = matrices(g);
  DGPConfig cfg;
  cfg.graph = g;
  cfg.errors = ErrorModel::custom;
  cfg.custom_edge_sd = Eigen::Vector3d(0.1, 0.0, 2.0);
  RealizedDGP dgp = realize_dgp(cfg, gm);
  CHECK((dgp.edge_sd - cfg.custom_edge_sd).cwiseAbs().maxCoeff() == 0.0);

  cfg.custom_edge_sd = Eigen::Vector2d(1.0, 1.0);  // wrong length
  CHECK_THROWS_AS(realize_dgp(cfg, gm), InputError);
}

TEST_CASE("config parsing") {
  SimConfig cfg = parse_sim_config(
      "# comment\ngraph = hypercube\nN = 3\nreps = 50\nsigma2 = 2.0\n"
      "errors = heteroskedastic\nseed = 9\n");
  CHECK(cfg.family == "hypercube");
  CHECK(cfg.N == 3);
  CHECK(cfg.reps == 50);
  CHECK(cfg.sigma2 == doctest::Approx(2.0));
  CHECK(cfg.errors == ErrorModel::heteroskedastic);
  CHECK(cfg.seed == 9);

  CHECK_THROWS_WITH_AS(parse_sim_config("graph = star\nnn = 4\nbogus = 1\n"),
                       doctest::Contains("unknown config keys"), InputError);
  CHECK_THROWS_AS(parse_sim_config("n = 4\n"), InputError);  // no family
}

TEST_CASE("simulate summary determinism across thread counts") {
  SimConfig cfg = parse_sim_config(
      "graph = complete\nn = 10\nreps = 200\nsigma2 = 1.0\nseed = 77\n");

  setenv("NETFE_THREADS", "1", 1);
  const std::string one = simulate_summary(cfg).dump();
  setenv("NETFE_THREADS", "4", 1);
  const std::string four = simulate_summary(cfg).dump();
  unsetenv("NETFE_THREADS");
  CHECK(one == four);
}

TEST_CASE("noiseless simulate flags exact recovery") {
  SimConfig cfg = parse_sim_config(
      "graph = star\nn = 6\nreps = 10\nsigma2 = 0\nseed = 2\n");
  nlohmann::json out = simulate_summary(cfg);
  CHECK(out["recovery"]["exact_recovery"].get<bool>());
}

TEST_SUITE_END();
