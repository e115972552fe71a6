#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "netfe/bipartite.hpp"
#include "netfe/graph.hpp"

namespace netfe {

/// Erdos-Renyi G(n, p): every unordered pair gets an independent edge.
/// Throws if the draw produces no edges at all.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// N-dimensional hypercube: 2^N vertices, N 2^{N-1} edges, N-regular.
Graph hypercube(int N);

/// Hypercube plus one edge per vertex pair at Hamming distance two:
/// 2^N vertices, N(N+1) 2^{N-1} / 2 edges, degree N(N+1)/2.
Graph extended_hypercube(int N);

/// Star on n vertices around center 1 (n >= 3).
Graph star(int n);

/// Hub plus a cycle through n rim vertices: n+1 vertices, 2n edges, center
/// degree n, rim degree 3. lambda2 = min{4/3, 1 - (2/3)cos(2 pi / n)}.
Graph wheel(int n);

/// Complete graph K_n.
Graph complete(int n);

/// Matched data skeleton: each of the n1 type-1 units draws
/// `edges_per_type1` type-2 partners uniformly with replacement (rows get
/// outcome 0; connectivity not guaranteed).
BipartiteData random_bipartite(int n1, int n2, int edges_per_type1,
                               std::uint64_t seed);

enum class ErrorModel { homoskedastic, heteroskedastic, custom };

/// Simulation design. True alpha is drawn standard normal and projected onto
/// d'alpha = 0 unless supplied. The heteroskedastic rule draws per-edge
/// variances 0.5 + |N(0,1)| once per fixture; custom takes the caller's
/// per-edge standard deviations.
struct DGPConfig {
  Graph graph;
  double sigma2 = 1.0;
  ErrorModel errors = ErrorModel::homoskedastic;
  std::uint64_t seed = 1;
  Eigen::VectorXd alpha;          // empty: draw from the config seed
  Eigen::MatrixXd X;              // m x p, optional
  Eigen::VectorXd beta;           // p, optional
  Eigen::VectorXd custom_edge_sd; // m, required for ErrorModel::custom
};

/// Realized design held fixed across replications.
struct RealizedDGP {
  Eigen::VectorXd alpha;       // d-normalized truth
  Eigen::VectorXd edge_sd;     // per-edge error standard deviations
  Eigen::VectorXd mean;        // B alpha + X beta
};

RealizedDGP realize_dgp(const DGPConfig& cfg, const GraphMatrices& gm);

/// Replication-indexed outcome stream: y(rep) is a pure function of
/// (config seed, rep), so parallel consumers replay identically.
class MonteCarloStream {
public:
  MonteCarloStream(const DGPConfig& cfg, const GraphMatrices& gm);

  const RealizedDGP& dgp() const { return dgp_; }
  Eigen::VectorXd errors(std::uint64_t rep) const;
  Eigen::VectorXd outcome(std::uint64_t rep) const;  // mean + errors(rep)

private:
  RealizedDGP dgp_;
  std::uint64_t seed_;
  int m_;
};

/// Draw a d-normalized standard normal effect vector.
Eigen::VectorXd draw_alpha(const Eigen::VectorXd& d, std::uint64_t seed);

}  // namespace netfe
