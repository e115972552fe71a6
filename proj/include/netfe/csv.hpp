#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "netfe/bipartite.hpp"
#include "netfe/graph.hpp"

namespace netfe {

/// Edge-list CSV with header `i,j[,w]` (weight defaults to 1.0). Ids are
/// arbitrary strings; errors carry 1-based file line numbers.
std::vector<std::tuple<std::string, std::string, double>> parse_edge_csv(
    const std::string& path);

Graph read_edge_csv(const std::string& path);

/// Matched CSV with header `i,j,y[,x1,...,xp]` (an optional `w` column after
/// `j` is accepted for general-graph fits).
struct MatchedCsv {
  std::vector<MatchedRow> rows;
  std::vector<double> w;  // per-row weights (all 1.0 when absent)
  bool has_weights = false;
};

MatchedCsv read_matched_csv(const std::string& path);

void write_edge_csv(const std::string& path, const Graph& g);
void write_projection_csv(const std::string& path, const Projection& proj);
void write_matched_csv(const std::string& path, const BipartiteData& bd);

/// Per-vertex fit export: header `vertex_id,alpha,se`.
void write_fit_csv(const std::string& path, const std::vector<std::string>& ids,
                   const Eigen::VectorXd& alpha, const Eigen::VectorXd& se);

}  // namespace netfe
