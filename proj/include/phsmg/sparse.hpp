#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "phsmg/geometry.hpp"

namespace phsmg {

/// Row-compressed sparse operator. Row-major Eigen storage is CSR, so the
/// raw arrays are available for the ordered sweeps in the smoother.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  SparseOperator() = default;
  explicit SparseOperator(Matrix m) : m_(std::move(m)) { m_.makeCompressed(); }

  static SparseOperator from_triplets(int rows, int cols, const std::vector<Triplet>& ts);
  static SparseOperator identity(int n);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  int nonzeros() const { return static_cast<int>(m_.nonZeros()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const;

  /// Same operator with rows and columns renumbered: entry (i, j) moves to
  /// (new_of[i], new_of[j]). Requires a square operator.
  SparseOperator renumbered_symmetric(const std::vector<int>& new_of) const;

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  const Matrix& eigen() const { return m_; }

  /// Coordinate-format Matrix Market, 1-based indices.
  void write_matrix_market(std::ostream& out) const;

 private:
  Matrix m_;
};

/// Largest |i - j| over stored entries; 0 for diagonal or empty operators.
int bandwidth(const SparseOperator& a);

/// Reverse Cuthill-McKee ordering of the symmetrized adjacency of a: BFS
/// from a minimum-degree vertex, neighbours visited by ascending (degree,
/// index), order reversed. Returns new_of: new_of[old] = new position.
std::vector<int> rcm_ordering(const SparseOperator& a);

}  // namespace phsmg
