#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "phsmg/assembly.hpp"
#include "phsmg/manufactured.hpp"

// Shared test fixtures: deterministic random points, synthetic single-level
// problems, and small numerical oracles.

namespace testutil {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// n jittered points in the unit square (deterministic in seed).
inline std::vector<Eigen::Vector2d> scattered_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(n);
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  for (int i = 0; i < n; ++i) {
    const int ix = i % side, iy = i / side;
    pts.push_back({(ix + 0.2 + 0.6 * uniform01(rng)) / side,
                   (iy + 0.2 + 0.6 * uniform01(rng)) / side});
  }
  return pts;
}

/// All-interior PointSet wrapper around explicit coordinates.
inline phsmg::PointSet interior_pointset(std::vector<Eigen::Vector2d> pts) {
  phsmg::PointSet ps;
  ps.geometry = phsmg::Geometry::square();
  ps.points = std::move(pts);
  ps.kind.assign(ps.points.size(), phsmg::PointKind::Interior);
  ps.normal.assign(ps.points.size(), Eigen::Vector2d::Zero());
  return ps;
}

/// DiscreteProblem holding an arbitrary dense matrix; rows map to points 1:1.
inline phsmg::DiscreteProblem synthetic_problem(const Eigen::MatrixXd& a,
                                                const Eigen::VectorXd& b) {
  phsmg::DiscreteProblem prob;
  std::vector<phsmg::SparseOperator::Triplet> ts;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) ts.emplace_back(i, j, a(i, j));
  prob.A = phsmg::SparseOperator::from_triplets(static_cast<int>(a.rows()),
                                                static_cast<int>(a.cols()), ts);
  prob.b = b;
  prob.point_of.resize(a.rows());
  prob.row_of.resize(a.rows());
  for (int i = 0; i < a.rows(); ++i) prob.point_of[i] = prob.row_of[i] = i;
  return prob;
}

/// Assembly of the manufactured Poisson problem with exact boundary data.
inline phsmg::DiscreteProblem manufactured_problem(const phsmg::PointSet& ps,
                                                   const phsmg::CloudSet& clouds,
                                                   const phsmg::ManufacturedCase& mc,
                                                   const phsmg::AssemblyOptions& opts = {}) {
  phsmg::BoundaryData bc;
  bc.dirichlet = [&mc](const Eigen::Vector2d& x) { return mc.value(x); };
  bc.neumann_flux = [&ps, &mc](const Eigen::Vector2d& x) {
    for (int i = 0; i < ps.size(); ++i)
      if (ps.points[i] == x) return mc.flux(x, ps.normal[i]);
    throw phsmg::Error("flux requested off the boundary");
  };
  const auto source = [&mc](const Eigen::Vector2d& x) { return mc.source(x); };
  return assemble_poisson(ps, clouds, source, bc, opts);
}

/// Five-point central-difference Laplacian of a scalar field.
template <typename F>
double fd_laplacian(const F& f, const Eigen::Vector2d& x, double h = 1e-4) {
  return (f({x[0] + h, x[1]}) + f({x[0] - h, x[1]}) + f({x[0], x[1] + h}) +
          f({x[0], x[1] - h}) - 4.0 * f(x)) /
         (h * h);
}

}  // namespace testutil
