#include "netfe/bipartite.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "netfe/error.hpp"

namespace netfe {

BipartiteData::BipartiteData(const std::vector<MatchedRow>& rows) {
  if (rows.empty()) throw InputError("empty matched data: m > 0 required");
  m_ = static_cast<int>(rows.size());
  p_ = static_cast<int>(rows.front().x.size());

  std::unordered_map<std::string, int> map1, map2;
  auto intern = [](std::unordered_map<std::string, int>& map,
                   std::vector<std::string>& ids, const std::string& s) {
    auto [it, inserted] = map.emplace(s, static_cast<int>(ids.size()) + 1);
    if (inserted) ids.push_back(s);
    return it->second;
  };

  i_.reserve(m_);
  j_.reserve(m_);
  y_.resize(m_);
  X_.resize(m_, p_);
  for (int r = 0; r < m_; ++r) {
    const MatchedRow& row = rows[r];
    if (static_cast<int>(row.x.size()) != p_) {
      throw InputError("covariate dimension varies at row " + std::to_string(r + 1));
    }
    i_.push_back(intern(map1, ids1_, row.i));
    j_.push_back(intern(map2, ids2_, row.j));
    y_[r] = row.y;
    for (int c = 0; c < p_; ++c) X_(r, c) = row.x[c];
  }
  n1_ = static_cast<int>(ids1_.size());
  n2_ = static_cast<int>(ids2_.size());
}

BipartiteData build_bipartite(const std::vector<MatchedRow>& rows) {
  return BipartiteData(rows);
}

Eigen::SparseMatrix<double> BipartiteData::B1() const {
  Eigen::SparseMatrix<double> B(m_, n1_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m_);
  for (int r = 0; r < m_; ++r) t.emplace_back(r, i_[r] - 1, 1.0);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

Eigen::SparseMatrix<double> BipartiteData::B2() const {
  Eigen::SparseMatrix<double> B(m_, n2_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m_);
  for (int r = 0; r < m_; ++r) t.emplace_back(r, j_[r] - 1, 1.0);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

Eigen::VectorXd BipartiteData::degrees1() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n1_);
  for (int r = 0; r < m_; ++r) d[i_[r] - 1] += 1.0;
  return d;
}

Eigen::VectorXd BipartiteData::degrees2() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n2_);
  for (int r = 0; r < m_; ++r) d[j_[r] - 1] += 1.0;
  return d;
}

StackedTwoWay stack_two_way(const BipartiteData& bd) {
  std::vector<Edge> edges;
  edges.reserve(bd.m());
  for (int r = 0; r < bd.m(); ++r) {
    // type-1 id < type-2 id by construction, so the +1 of the incidence
    // lands on the type-1 column: incidence = (B1, -B2).
    edges.push_back({bd.type1_of_row(r), bd.n1() + bd.type2_of_row(r), 1.0});
  }
  std::vector<std::string> ids;
  ids.reserve(bd.n1() + bd.n2());
  for (const auto& s : bd.ids1()) ids.push_back("1:" + s);
  for (const auto& s : bd.ids2()) ids.push_back("2:" + s);

  StackedTwoWay out;
  out.graph = Graph(bd.n1() + bd.n2(), std::move(edges), std::move(ids));
  out.n1 = bd.n1();
  out.n2 = bd.n2();
  return out;
}

Eigen::SparseMatrix<double> projected_adjacency(const BipartiteData& bd) {
  const Eigen::VectorXd d1 = bd.degrees1();
  // rows grouped by type-1 unit
  std::vector<std::vector<int>> rows_of(bd.n1());
  for (int r = 0; r < bd.m(); ++r) rows_of[bd.type1_of_row(r) - 1].push_back(r);

  std::map<std::pair<int, int>, double> acc;
  for (int i = 0; i < bd.n1(); ++i) {
    // multiplicity of each type-2 unit among i's rows
    std::map<int, int> count;
    for (int r : rows_of[i]) count[bd.type2_of_row(r)]++;
    for (auto it1 = count.begin(); it1 != count.end(); ++it1) {
      for (auto it2 = std::next(it1); it2 != count.end(); ++it2) {
        const double w =
            static_cast<double>(it1->second) * it2->second / d1[i];
        acc[{it1->first, it2->first}] += w;
      }
    }
  }

  Eigen::SparseMatrix<double> A(bd.n2(), bd.n2());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * acc.size());
  for (const auto& [jj, w] : acc) {
    t.emplace_back(jj.first - 1, jj.second - 1, w);
    t.emplace_back(jj.second - 1, jj.first - 1, w);
  }
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Projection one_mode_projection(const BipartiteData& bd) {
  Projection out;

  const Eigen::VectorXd d1 = bd.degrees1();
  std::vector<std::vector<int>> rows_of(bd.n1());
  for (int r = 0; r < bd.m(); ++r) rows_of[bd.type1_of_row(r) - 1].push_back(r);

  long long m_prime = 0;
  for (int i = 0; i < bd.n1(); ++i) {
    const long long di = static_cast<long long>(rows_of[i].size());
    m_prime += di * (di - 1) / 2;
  }
  out.m_prime = m_prime;

  out.Q.resize(m_prime, bd.m());
  out.W.resize(m_prime);
  out.connector.reserve(m_prime);
  std::vector<Eigen::Triplet<double>> tq;
  tq.reserve(2 * static_cast<std::size_t>(m_prime));

  long long e = 0;
  for (int i = 0; i < bd.n1(); ++i) {
    const std::vector<int>& rows = rows_of[i];  // ascending row labels
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        tq.emplace_back(e, rows[a], 1.0);
        tq.emplace_back(e, rows[b], -1.0);
        out.W[e] = 1.0 / std::sqrt(d1[i]);
        out.connector.push_back(i + 1);
        ++e;
      }
    }
  }
  out.Q.setFromTriplets(tq.begin(), tq.end());

  // simple weighted graph on V2 from the closed-form adjacency
  Eigen::SparseMatrix<double> A = projected_adjacency(bd);
  std::vector<EdgeInput> edges;
  for (int c = 0; c < A.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      if (it.row() < it.col()) {
        edges.push_back({it.row() + 1, it.col() + 1, it.value()});
      }
    }
  }
  Eigen::VectorXd rowsum = A * Eigen::VectorXd::Ones(bd.n2());
  for (int j = 0; j < bd.n2(); ++j) {
    if (rowsum[j] == 0.0) out.isolated2.push_back(j + 1);
  }
  if (edges.empty()) {
    out.graph = Graph();  // empty projection: every type-1 unit has degree 1
  } else {
    out.graph = build_graph(edges, bd.n2());
    // carry the type-2 original ids
    std::vector<std::string> ids = bd.ids2();
    out.graph = Graph(bd.n2(),
                      std::vector<Edge>(out.graph.edges()), std::move(ids));
  }
  return out;
}

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> q_and_w(
    const BipartiteData& bd) {
  Projection proj = one_mode_projection(bd);
  return {std::move(proj.Q), std::move(proj.W)};
}

}  // namespace netfe
