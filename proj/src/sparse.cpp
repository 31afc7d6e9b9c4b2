#include "phsmg/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace phsmg {

SparseOperator SparseOperator::from_triplets(int rows, int cols,
                                             const std::vector<Triplet>& ts) {
  Matrix m(rows, cols);
  m.setFromTriplets(ts.begin(), ts.end());
  m.makeCompressed();
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(int n) {
  Matrix m(n, n);
  m.setIdentity();
  return SparseOperator(std::move(m));
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw Error("SparseOperator::apply: size mismatch");
  return m_ * x;
}

Eigen::VectorXd SparseOperator::residual(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& b) const {
  if (b.size() != rows()) throw Error("SparseOperator::residual: rhs size mismatch");
  return b - apply(x);
}

SparseOperator SparseOperator::renumbered_symmetric(const std::vector<int>& new_of) const {
  if (rows() != cols()) throw Error("renumbered_symmetric: operator must be square");
  if (static_cast<int>(new_of.size()) != rows())
    throw Error("renumbered_symmetric: permutation size mismatch");
  std::vector<Triplet> ts;
  ts.reserve(nonzeros());
  for (int i = 0; i < rows(); ++i)
    for (Matrix::InnerIterator it(m_, i); it; ++it)
      ts.emplace_back(new_of[i], new_of[it.col()], it.value());
  return from_triplets(rows(), cols(), ts);
}

void SparseOperator::write_matrix_market(std::ostream& out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows() << " " << cols() << " " << nonzeros() << "\n";
  char line[128];
  for (int i = 0; i < rows(); ++i)
    for (Matrix::InnerIterator it(m_, i); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", i + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      out << line;
    }
}

int bandwidth(const SparseOperator& a) {
  int band = 0;
  const auto& m = a.eigen();
  for (int i = 0; i < a.rows(); ++i)
    for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it)
      band = std::max(band, std::abs(i - static_cast<int>(it.col())));
  return band;
}

std::vector<int> rcm_ordering(const SparseOperator& a) {
  if (a.rows() != a.cols()) throw Error("rcm_ordering: operator must be square");
  const int n = a.rows();
  std::vector<std::vector<int>> adj(n);
  const auto& m = a.eigen();
  for (int i = 0; i < n; ++i)
    for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j != i) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  auto by_degree_then_index = [&](int x, int y) {
    const size_t dx = adj[x].size(), dy = adj[y].size();
    return dx != dy ? dx < dy : x < y;
  };

  std::vector<bool> seen(n, false);
  std::vector<int> order;
  order.reserve(n);
  for (;;) {
    int start = -1;
    for (int i = 0; i < n; ++i)
      if (!seen[i] && (start < 0 || by_degree_then_index(i, start))) start = i;
    if (start < 0) break;

    seen[start] = true;
    order.push_back(start);
    for (size_t head = order.size() - 1; head < order.size(); ++head) {
      std::vector<int> next;
      for (int nb : adj[order[head]])
        if (!seen[nb]) {
          seen[nb] = true;
          next.push_back(nb);
        }
      std::sort(next.begin(), next.end(), by_degree_then_index);
      order.insert(order.end(), next.begin(), next.end());
    }
  }

  std::reverse(order.begin(), order.end());
  std::vector<int> new_of(n);
  for (int pos = 0; pos < n; ++pos) new_of[order[pos]] = pos;
  return new_of;
}

}  // namespace phsmg
