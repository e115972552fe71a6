#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netfe {

/// One undirected edge. Endpoints are compact 1-based vertex ids stored with
/// i < j; the incidence orientation puts +sqrt(w) on the smaller id. The edge
/// label is its 1-based position in Graph::edges().
struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;
};

/// Weighted undirected multigraph on vertices {1..n}. No loops, weights
/// strictly positive, repeated (i,j) pairs are distinct edges. Immutable
/// after construction; safe to share across threads.
class Graph {
public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges, std::vector<std::string> original_ids);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int label) const { return edges_[label - 1]; }

  /// Original id of compact vertex v (1-based).
  const std::string& original_id(int v) const { return original_ids_[v - 1]; }
  const std::vector<std::string>& original_ids() const { return original_ids_; }

private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> original_ids_;
};

/// Raw input row: (i, j, w) with caller-side ids.
struct EdgeInput {
  std::int64_t i = 0;
  std::int64_t j = 0;
  double w = 1.0;
};

/// Build a graph from integer-id rows. Vertex ids are compacted to {1..n} in
/// ascending order of the original ids; the mapping is retained on the Graph.
/// Rejects loops, non-positive weights and empty edge lists.
Graph build_graph(const std::vector<EdgeInput>& edge_list);

/// Same, but the vertex set is {1..n} literally (ids must already lie in that
/// range). Vertices not touched by any edge are kept as isolated vertices.
Graph build_graph(const std::vector<EdgeInput>& edge_list, int n);

/// Build from string-id rows (CSV ingestion path). Ids are compacted in order
/// of first appearance.
Graph build_graph_labeled(
    const std::vector<std::tuple<std::string, std::string, double>>& rows);

/// Incidence, adjacency, degree and Laplacian matrices of a graph, all in
/// sparse storage. Satisfies B'B = L = D - A and B*1 = 0.
struct GraphMatrices {
  Eigen::SparseMatrix<double> B;  // m x n oriented incidence, entries +-sqrt(w)
  Eigen::SparseMatrix<double> A;  // n x n adjacency, zero diagonal
  Eigen::SparseMatrix<double> L;  // n x n Laplacian D - A
  Eigen::VectorXd d;              // weighted degrees, d_i = sum_j A_ij

  int n() const { return static_cast<int>(d.size()); }
  int m() const { return static_cast<int>(B.rows()); }
  /// iota'd = sum of degrees = 2 * total edge weight.
  double degree_sum() const { return d.sum(); }
};

GraphMatrices matrices(const Graph& g);

/// Per-vertex adjacency lists: neighbors(v) = {(u, A_vu)} for 1-based v.
class NeighborIndex {
public:
  explicit NeighborIndex(const Graph& g);

  const std::vector<std::pair<int, double>>& neighbors(int v) const {
    return adj_[v - 1];
  }
  int n() const { return static_cast<int>(adj_.size()); }

private:
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

/// Connected components as lists of 1-based vertex ids, sorted by size
/// descending; ties broken by smallest vertex id. Ids within a component are
/// ascending.
std::vector<std::vector<int>> connected_components(const Graph& g);

bool is_connected(const Graph& g);

/// Induced subgraph on the largest component together with the map from new
/// compact ids back to the input graph's ids: vertex_map[v'-1] = old v.
struct LargestComponent {
  Graph graph;
  std::vector<int> vertex_map;
  int dropped_vertices = 0;
  int dropped_edges = 0;
};

LargestComponent largest_component(const Graph& g);

}  // namespace netfe
