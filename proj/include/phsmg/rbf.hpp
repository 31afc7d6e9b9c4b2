#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "phsmg/geometry.hpp"

// Polyharmonic-spline RBF interpolation with an appended polynomial tail.
// A LocalSystem fits s(x) = sum_i a_i phi(|x - x_i|) + sum_j g_j q_j(x) to
// nodal data, with the moment conditions P^T a = 0 closing the system; any
// linear functional of s then collapses to one weight per node. The fit is
// built on shifted and scaled coordinates (centroid to origin, radius to 1),
// which keeps the saddle matrix conditioned independently of cloud location
// and size; extracted weights are scaled back to physical units.

namespace phsmg {

/// phi(r) = r^(2p+1), the odd polyharmonic spline.
double phs_kernel(double r, int p);

/// Laplacian of phi about its center: (2p+1)(2p+dim-1) r^(2p-1).
double phs_laplacian(double r, int p, int dim = 2);

/// Bivariate monomial exponents of total degree <= degree, graded order:
/// 1, x, y, x^2, xy, y^2, ...
std::vector<std::array<int, 2>> monomial_exponents(int degree);

class LocalSystem {
 public:
  /// Build and factorize the saddle system for the given nodes. Requires
  /// at least as many nodes as monomials and pairwise-distinct nodes; a
  /// reciprocal condition estimate below rcond_floor is rejected as a
  /// degenerate cloud.
  LocalSystem(std::vector<Eigen::Vector2d> nodes, int phs_power, int degree,
              double rcond_floor = 1e-12);

  int node_count() const { return n_; }
  int poly_count() const { return m_; }
  double rcond() const { return rcond_; }

  /// Stencil weights reproducing the functional at xe: w . f(nodes) ~ L[f](xe).
  /// Exact for polynomials up to the appended degree.
  Eigen::VectorXd interpolation_weights(const Eigen::Vector2d& xe) const;
  Eigen::VectorXd laplacian_weights(const Eigen::Vector2d& xe) const;
  Eigen::VectorXd normal_derivative_weights(const Eigen::Vector2d& xe,
                                            const Eigen::Vector2d& n) const;

  /// Solve the factorized saddle system; rhs and result are in scaled
  /// coordinates and have node_count()+poly_count() entries.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  const Eigen::MatrixXd& matrix() const { return D_; }
  const std::vector<Eigen::Vector2d>& scaled_nodes() const { return scaled_; }
  Eigen::Vector2d to_scaled(const Eigen::Vector2d& x) const { return (x - shift_) / scale_; }
  double scale() const { return scale_; }

 private:
  Eigen::VectorXd weights_from(const Eigen::VectorXd& rhs, double unit) const;

  int n_, m_, p_;
  std::vector<std::array<int, 2>> exps_;
  Eigen::Vector2d shift_;
  double scale_;
  std::vector<Eigen::Vector2d> scaled_;
  Eigen::MatrixXd D_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_;
};

}  // namespace phsmg
