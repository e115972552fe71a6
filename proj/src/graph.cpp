#include "netfe/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "netfe/error.hpp"

namespace netfe {

namespace {

void check_edge_row(std::int64_t i, std::int64_t j, double w, std::size_t row) {
  if (i == j) {
    throw InputError("loop edge (" + std::to_string(i) + "," + std::to_string(j) +
                     ") at row " + std::to_string(row + 1));
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw InputError("non-positive weight " + std::to_string(w) + " at row " +
                     std::to_string(row + 1));
  }
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges, std::vector<std::string> original_ids)
    : n_(n), edges_(std::move(edges)), original_ids_(std::move(original_ids)) {}

Graph build_graph(const std::vector<EdgeInput>& edge_list) {
  if (edge_list.empty()) throw InputError("empty edge list: m > 0 required");

  std::map<std::int64_t, int> compact;
  for (std::size_t r = 0; r < edge_list.size(); ++r) {
    const auto& e = edge_list[r];
    check_edge_row(e.i, e.j, e.w, r);
    if (e.i <= 0 || e.j <= 0) {
      throw InputError("vertex ids must be positive integers at row " +
                       std::to_string(r + 1));
    }
    compact.emplace(e.i, 0);
    compact.emplace(e.j, 0);
  }
  int next = 0;
  std::vector<std::string> ids;
  ids.reserve(compact.size());
  for (auto& [orig, c] : compact) {
    c = ++next;
    ids.push_back(std::to_string(orig));
  }

  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (const auto& e : edge_list) {
    int a = compact[e.i], b = compact[e.j];
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, e.w});
  }
  return Graph(next, std::move(edges), std::move(ids));
}

Graph build_graph(const std::vector<EdgeInput>& edge_list, int n) {
  if (edge_list.empty()) throw InputError("empty edge list: m > 0 required");
  if (n <= 0) throw InputError("vertex count must be positive");

  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (std::size_t r = 0; r < edge_list.size(); ++r) {
    const auto& e = edge_list[r];
    check_edge_row(e.i, e.j, e.w, r);
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
      throw InputError("vertex id outside {1.." + std::to_string(n) + "} at row " +
                       std::to_string(r + 1));
    }
    int a = static_cast<int>(e.i), b = static_cast<int>(e.j);
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, e.w});
  }
  std::vector<std::string> ids(n);
  for (int v = 1; v <= n; ++v) ids[v - 1] = std::to_string(v);
  return Graph(n, std::move(edges), std::move(ids));
}

Graph build_graph_labeled(
    const std::vector<std::tuple<std::string, std::string, double>>& rows) {
  if (rows.empty()) throw InputError("empty edge list: m > 0 required");

  std::unordered_map<std::string, int> compact;
  std::vector<std::string> ids;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = compact.emplace(s, static_cast<int>(ids.size()) + 1);
    if (inserted) ids.push_back(s);
    return it->second;
  };

  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [si, sj, w] = rows[r];
    if (si == sj) {
      throw InputError("loop edge (" + si + "," + sj + ") at row " +
                       std::to_string(r + 1));
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InputError("non-positive weight " + std::to_string(w) + " at row " +
                       std::to_string(r + 1));
    }
    int a = intern(si), b = intern(sj);
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, w});
  }
  const int n = static_cast<int>(ids.size());
  return Graph(n, std::move(edges), std::move(ids));
}

GraphMatrices matrices(const Graph& g) {
  const int n = g.vertex_count();
  const int m = g.edge_count();

  GraphMatrices gm;
  gm.B.resize(m, n);
  gm.A.resize(n, n);
  gm.L.resize(n, n);

  std::vector<Eigen::Triplet<double>> tb;
  tb.reserve(2 * static_cast<std::size_t>(m));
  std::vector<Eigen::Triplet<double>> ta;
  ta.reserve(2 * static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edges()[e];
    const double sw = std::sqrt(ed.w);
    tb.emplace_back(e, ed.i - 1, sw);
    tb.emplace_back(e, ed.j - 1, -sw);
    ta.emplace_back(ed.i - 1, ed.j - 1, ed.w);
    ta.emplace_back(ed.j - 1, ed.i - 1, ed.w);
  }
  gm.B.setFromTriplets(tb.begin(), tb.end());
  gm.A.setFromTriplets(ta.begin(), ta.end());

  gm.d = Eigen::VectorXd::Zero(n);
  for (const Edge& ed : g.edges()) {
    gm.d[ed.i - 1] += ed.w;
    gm.d[ed.j - 1] += ed.w;
  }

  std::vector<Eigen::Triplet<double>> tl = ta;
  for (auto& t : tl) t = {t.row(), t.col(), -t.value()};
  for (int v = 0; v < n; ++v) tl.emplace_back(v, v, gm.d[v]);
  gm.L.setFromTriplets(tl.begin(), tl.end());
  return gm;
}

NeighborIndex::NeighborIndex(const Graph& g) : adj_(g.vertex_count()) {
  const int n = g.vertex_count();
  std::vector<std::map<int, double>> acc(n);
  for (const Edge& e : g.edges()) {
    acc[e.i - 1][e.j] += e.w;
    acc[e.j - 1][e.i] += e.w;
  }
  for (int v = 0; v < n; ++v) {
    adj_[v].assign(acc[v].begin(), acc[v].end());
  }
}

namespace {

struct UnionFind {
  std::vector<int> parent, rank;
  explicit UnionFind(int n) : parent(n), rank(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }
};

}  // namespace

std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int n = g.vertex_count();
  UnionFind uf(n);
  for (const Edge& e : g.edges()) uf.unite(e.i - 1, e.j - 1);

  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[uf.find(v)].push_back(v + 1);

  std::vector<std::vector<int>> comps;
  comps.reserve(groups.size());
  for (auto& [root, vs] : groups) comps.push_back(std::move(vs));
  std::stable_sort(comps.begin(), comps.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });
  return comps;
}

bool is_connected(const Graph& g) {
  return connected_components(g).size() == 1;
}

LargestComponent largest_component(const Graph& g) {
  auto comps = connected_components(g);
  const std::vector<int>& keep = comps.front();

  LargestComponent out;
  out.vertex_map = keep;
  out.dropped_vertices = g.vertex_count() - static_cast<int>(keep.size());

  std::vector<int> newid(g.vertex_count() + 1, 0);
  for (std::size_t k = 0; k < keep.size(); ++k) newid[keep[k]] = static_cast<int>(k) + 1;

  std::vector<Edge> edges;
  std::vector<std::string> ids;
  ids.reserve(keep.size());
  for (int v : keep) ids.push_back(g.original_id(v));
  for (const Edge& e : g.edges()) {
    if (newid[e.i] != 0 && newid[e.j] != 0) {
      edges.push_back({newid[e.i], newid[e.j], e.w});
    } else {
      ++out.dropped_edges;
    }
  }
  out.graph = Graph(static_cast<int>(keep.size()), std::move(edges), std::move(ids));
  return out;
}

}  // namespace netfe
