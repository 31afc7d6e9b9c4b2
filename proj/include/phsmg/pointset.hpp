#pragma once

#include <filesystem>
#include <vector>

#include "phsmg/geometry.hpp"

namespace phsmg {

enum class PointKind { Interior, DirichletBoundary, NeumannBoundary };

/// Scattered collocation nodes for one discretization level.
/// Boundary points carry outward unit normals; interior normals are zero.
struct PointSet {
  Geometry geometry;
  int level_id = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<PointKind> kind;
  std::vector<Eigen::Vector2d> normal;

  int size() const { return static_cast<int>(points.size()); }
  int count(PointKind k) const;
  int interior_count() const { return count(PointKind::Interior); }
  bool is_boundary(int i) const { return kind[i] != PointKind::Interior; }
};

/// Mean nodal spacing sqrt(area / n); the abscissa of every convergence plot.
double average_spacing(const PointSet& ps);

/// Generate a quasi-uniform point set of roughly n_target nodes: boundary
/// curves are sampled equispaced, the interior is a jittered lattice thinned
/// to a minimum separation of 0.7 * sqrt(area / n_target). Deterministic in
/// (geometry, n_target, seed); the final count stays within 10% of n_target.
/// Boundary points are tagged Dirichlet; retag with with_boundary_kind.
PointSet generate_pointset(const Geometry& geometry, int n_target, unsigned seed);

/// Copy of ps with every boundary point retagged to k.
PointSet with_boundary_kind(PointSet ps, PointKind k);

/// Plain-text exchange format. Header "npoints <n> geometry <name> <params>",
/// then one "x y tag [nx ny]" line per point with tag in {i, d, nm}; '#'
/// starts a comment. Coordinates survive a round trip to full precision.
void save_pointset(const PointSet& ps, const std::filesystem::path& path);
PointSet load_pointset(const std::filesystem::path& path);

}  // namespace phsmg
