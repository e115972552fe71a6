#include "netfe/generators.hpp"

#include <bit>

#include "netfe/error.hpp"
#include "netfe/rng.hpp"

namespace netfe {

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 2) throw InputError("erdos_renyi needs n >= 2");
  if (!(p > 0.0) || p > 1.0) throw InputError("edge probability must be in (0,1]");
  CounterRng rng(seed, 0xe2);
  std::vector<EdgeInput> edges;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  if (edges.empty()) throw InputError("empty Erdos-Renyi draw: increase p or n");
  return build_graph(edges, n);
}

Graph hypercube(int N) {
  if (N < 1) throw InputError("hypercube needs N >= 1");
  const int n = 1 << N;
  std::vector<EdgeInput> edges;
  edges.reserve(static_cast<std::size_t>(N) * (n / 2));
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < N; ++b) {
      const int u = v ^ (1 << b);
      if (u > v) edges.push_back({v + 1, u + 1, 1.0});
    }
  }
  return build_graph(edges, n);
}

Graph extended_hypercube(int N) {
  if (N < 1) throw InputError("extended hypercube needs N >= 1");
  const int n = 1 << N;
  std::vector<EdgeInput> edges;
  for (int v = 0; v < n; ++v) {
    for (int u = v + 1; u < n; ++u) {
      const int dist = std::popcount(static_cast<unsigned>(u ^ v));
      if (dist == 1 || dist == 2) edges.push_back({v + 1, u + 1, 1.0});
    }
  }
  return build_graph(edges, n);
}

Graph star(int n) {
  if (n < 3) throw InputError("star needs n >= 3");
  std::vector<EdgeInput> edges;
  edges.reserve(n - 1);
  for (int j = 2; j <= n; ++j) edges.push_back({1, j, 1.0});
  return build_graph(edges, n);
}

Graph wheel(int n) {
  if (n < 3) throw InputError("wheel needs a rim of n >= 3");
  std::vector<EdgeInput> edges;
  edges.reserve(2 * n);
  for (int j = 2; j <= n + 1; ++j) edges.push_back({1, j, 1.0});
  for (int j = 2; j <= n; ++j) edges.push_back({j, j + 1, 1.0});
  edges.push_back({n + 1, 2, 1.0});
  return build_graph(edges, n + 1);
}

Graph complete(int n) {
  if (n < 2) throw InputError("complete graph needs n >= 2");
  std::vector<EdgeInput> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, 1.0});
  }
  return build_graph(edges, n);
}

BipartiteData random_bipartite(int n1, int n2, int edges_per_type1,
                               std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || edges_per_type1 < 1) {
    throw InputError("random_bipartite needs positive counts");
  }
  CounterRng rng(seed, 0xb1);
  std::vector<MatchedRow> rows;
  rows.reserve(static_cast<std::size_t>(n1) * edges_per_type1);
  for (int i = 1; i <= n1; ++i) {
    for (int k = 0; k < edges_per_type1; ++k) {
      const int j = static_cast<int>(rng.below(n2)) + 1;
      rows.push_back({"s" + std::to_string(i), "t" + std::to_string(j), 0.0, {}});
    }
  }
  return BipartiteData(rows);
}

Eigen::VectorXd draw_alpha(const Eigen::VectorXd& d, std::uint64_t seed) {
  CounterRng rng(seed, 0xa1);
  Eigen::VectorXd a(d.size());
  for (int i = 0; i < a.size(); ++i) a[i] = rng.normal();
  a -= d * (d.dot(a) / d.squaredNorm());
  return a;
}

RealizedDGP realize_dgp(const DGPConfig& cfg, const GraphMatrices& gm) {
  if (!(cfg.sigma2 > 0.0)) throw InputError("sigma2 must be positive");
  RealizedDGP out;
  out.alpha = cfg.alpha.size() > 0 ? cfg.alpha : draw_alpha(gm.d, cfg.seed);
  if (out.alpha.size() != gm.n()) throw InputError("alpha length mismatch");

  const int m = gm.m();
  out.edge_sd.resize(m);
  if (cfg.errors == ErrorModel::homoskedastic) {
    out.edge_sd.setConstant(std::sqrt(cfg.sigma2));
  } else if (cfg.errors == ErrorModel::heteroskedastic) {
    CounterRng rng(cfg.seed, 0x5e);
    for (int e = 0; e < m; ++e) {
      out.edge_sd[e] = std::sqrt(cfg.sigma2 * (0.5 + std::abs(rng.normal())));
    }
  } else {
    if (cfg.custom_edge_sd.size() != m) {
      throw InputError("custom error model needs one sd per edge");
    }
    if (cfg.custom_edge_sd.minCoeff() < 0.0) {
      throw InputError("custom edge sds must be nonnegative");
    }
    out.edge_sd = cfg.custom_edge_sd;
  }

  out.mean = gm.B * out.alpha;
  if (cfg.X.cols() > 0) {
    if (cfg.beta.size() != cfg.X.cols()) {
      throw InputError("beta length does not match covariate count");
    }
    out.mean += cfg.X * cfg.beta;
  }
  return out;
}

MonteCarloStream::MonteCarloStream(const DGPConfig& cfg, const GraphMatrices& gm)
    : dgp_(realize_dgp(cfg, gm)), seed_(cfg.seed), m_(gm.m()) {}

Eigen::VectorXd MonteCarloStream::errors(std::uint64_t rep) const {
  CounterRng rng(seed_, 0x100000ULL + rep);
  Eigen::VectorXd u(m_);
  for (int e = 0; e < m_; ++e) u[e] = dgp_.edge_sd[e] * rng.normal();
  return u;
}

Eigen::VectorXd MonteCarloStream::outcome(std::uint64_t rep) const {
  return dgp_.mean + errors(rep);
}

}  // namespace netfe
