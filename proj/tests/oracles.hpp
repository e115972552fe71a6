// Test-only oracles, deliberately independent of the library's solve paths:
// the pseudoinverses here come from a dense eigendecomposition of S, the
// constrained fits from an explicit KKT system, components from BFS.
#pragma once

#include <Eigen/Dense>
#include <queue>
#include <vector>

#include "netfe/graph.hpp"
#include "netfe/rng.hpp"

namespace oracles {

inline Eigen::MatrixXd sdag_dense(const netfe::GraphMatrices& gm) {
  Eigen::MatrixXd dinv = gm.d.cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::MatrixXd S = dinv * Eigen::MatrixXd(gm.L) * dinv;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  Eigen::VectorXd inv_ev = es.eigenvalues();
  const double cutoff = 1e-9 * std::max(1.0, inv_ev.maxCoeff());
  for (int i = 0; i < inv_ev.size(); ++i) {
    inv_ev[i] = inv_ev[i] > cutoff ? 1.0 / inv_ev[i] : 0.0;
  }
  return es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd lstar_dense(const netfe::GraphMatrices& gm) {
  Eigen::MatrixXd dinv = gm.d.cwiseSqrt().cwiseInverse().asDiagonal();
  return dinv * sdag_dense(gm) * dinv;
}

/// Equality-constrained least squares by the full KKT system:
/// minimize ||y - B a - X b||^2 subject to d'a = 0.
struct KktFit {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
};

inline KktFit kkt_constrained_ls(const Eigen::MatrixXd& B, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y, const Eigen::VectorXd& d) {
  const int n = static_cast<int>(B.cols());
  const int p = static_cast<int>(X.cols());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + p + 1, n + p + 1);
  K.topLeftCorner(n, n) = B.transpose() * B;
  if (p > 0) {
    K.block(0, n, n, p) = B.transpose() * X;
    K.block(n, 0, p, n) = X.transpose() * B;
    K.block(n, n, p, p) = X.transpose() * X;
  }
  K.block(0, n + p, n, 1) = d;
  K.block(n + p, 0, 1, n) = d.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + p + 1);
  rhs.head(n) = B.transpose() * y;
  if (p > 0) rhs.segment(n, p) = X.transpose() * y;
  Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(K).solve(rhs);
  return {sol.head(n), sol.segment(n, p)};
}

inline std::vector<std::vector<int>> bfs_components(const netfe::Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n + 1);
  for (const netfe::Edge& e : g.edges()) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<int> comp(n + 1, 0);
  std::vector<std::vector<int>> out;
  for (int s = 1; s <= n; ++s) {
    if (comp[s]) continue;
    out.emplace_back();
    const int id = static_cast<int>(out.size());
    std::queue<int> q;
    q.push(s);
    comp[s] = id;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      out.back().push_back(v);
      for (int u : adj[v]) {
        if (!comp[u]) {
          comp[u] = id;
          q.push(u);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });
  return out;
}

/// Random connected multigraph: spanning tree plus extra edges, optionally
/// with non-unit weights and duplicated pairs.
inline netfe::Graph random_connected_graph(int n, int extra_edges,
                                           std::uint64_t seed,
                                           bool weighted = false) {
  netfe::CounterRng rng(seed, 0x7e57);
  std::vector<netfe::EdgeInput> edges;
  for (int v = 2; v <= n; ++v) {
    const int u = static_cast<int>(rng.below(v - 1)) + 1;
    edges.push_back({u, v, weighted ? 0.25 + 2.0 * rng.uniform() : 1.0});
  }
  for (int k = 0; k < extra_edges; ++k) {
    int a = static_cast<int>(rng.below(n)) + 1;
    int b = static_cast<int>(rng.below(n)) + 1;
    if (a == b) continue;
    edges.push_back({a, b, weighted ? 0.25 + 2.0 * rng.uniform() : 1.0});
  }
  return netfe::build_graph(edges, n);
}

}  // namespace oracles
