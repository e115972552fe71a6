#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "netfe/graph.hpp"

namespace netfe {

/// One matched observation: type-1 unit i, type-2 unit j, outcome y and an
/// optional covariate vector. Repeated (i,j) pairs are distinct rows
/// (unbalanced panel).
struct MatchedRow {
  std::string i;
  std::string j;
  double y = 0.0;
  std::vector<double> x;
};

/// Two-type matched data with ids compacted per type (1..n1 and 1..n2; the
/// namespaces are separate, so equal strings on both sides never collide).
class BipartiteData {
public:
  explicit BipartiteData(const std::vector<MatchedRow>& rows);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int m() const { return m_; }
  int p() const { return p_; }

  /// Compact ids of row r (1-based).
  int type1_of_row(int r) const { return i_[r]; }
  int type2_of_row(int r) const { return j_[r]; }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& X() const { return X_; }

  /// 0/1 indicator matrices: (B1)_{ei} = 1 iff row e involves type-1 unit i.
  Eigen::SparseMatrix<double> B1() const;
  Eigen::SparseMatrix<double> B2() const;

  /// Degrees d_i of type-1 units (row counts) and of type-2 units.
  Eigen::VectorXd degrees1() const;
  Eigen::VectorXd degrees2() const;

  const std::vector<std::string>& ids1() const { return ids1_; }
  const std::vector<std::string>& ids2() const { return ids2_; }

private:
  int n1_ = 0, n2_ = 0, m_ = 0, p_ = 0;
  std::vector<int> i_, j_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd X_;
  std::vector<std::string> ids1_, ids2_;
};

BipartiteData build_bipartite(const std::vector<MatchedRow>& rows);

/// Stack the two-way model onto a single graph: vertices 1..n1 are type 1,
/// n1+1..n1+n2 are type 2, one unweighted edge per row. The incidence of the
/// stacked graph equals (B1, -B2); vertex effects map as alpha_i = mu_i for
/// type 1 and alpha_{n1+j} = -eta_j for type 2.
struct StackedTwoWay {
  Graph graph;
  int n1 = 0;
  int n2 = 0;
};

StackedTwoWay stack_two_way(const BipartiteData& bd);

/// Weighted one-mode projection onto the type-2 side.
struct Projection {
  Graph graph;             // simple weighted graph on V2 with adjacency A'
  Eigen::SparseMatrix<double> Q;  // m' x m signed pairing matrix
  Eigen::VectorXd W;              // m' diagonal weights 1/sqrt(d_{c(e)})
  long long m_prime = 0;          // sum_i d_i (d_i - 1) / 2
  std::vector<int> connector;     // e' -> connecting type-1 unit (1-based)
  std::vector<int> isolated2;     // type-2 units with no projected edge
};

/// Project onto V2: every unordered pair of rows sharing a type-1 unit
/// becomes a projected edge. Pair enumeration is connector-major, then by the
/// two row labels ascending; Q carries +1 on the lower-labeled row. All-zero
/// rows of Q B2 (pairs within one type-2 unit) are retained.
Projection one_mode_projection(const BipartiteData& bd);

/// Just the (Q, W) pair of the projection.
std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> q_and_w(const BipartiteData& bd);

/// Closed-form adjacency A' of the projection (n2 x n2, zero diagonal).
Eigen::SparseMatrix<double> projected_adjacency(const BipartiteData& bd);

}  // namespace netfe
