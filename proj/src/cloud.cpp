#include "phsmg/cloud.hpp"

#include <cmath>
#include <memory>

#include "phsmg/kdtree.hpp"

namespace phsmg {

int monomial_count(int degree) {
  if (degree < 0) throw Error("monomial_count: degree must be non-negative");
  return (degree + 1) * (degree + 2) / 2;
}

int cloud_size(int degree, double ratio) {
  if (ratio < 1.0) throw Error("cloud_size: ratio must be at least 1");
  return static_cast<int>(std::ceil(ratio * monomial_count(degree)));
}

CloudSet build_clouds(const PointSet& ps, int n_cloud) {
  if (n_cloud < 1) throw Error("build_clouds: n_cloud must be positive");

  std::vector<int> all_ids(ps.size());
  std::vector<int> interior_ids;
  for (int i = 0; i < ps.size(); ++i) {
    all_ids[i] = i;
    if (ps.kind[i] == PointKind::Interior) interior_ids.push_back(i);
  }
  if (static_cast<int>(interior_ids.size()) < n_cloud)
    throw Error("build_clouds: point set has " + std::to_string(interior_ids.size()) +
                " interior points, need at least " + std::to_string(n_cloud));

  const KdTree2d all_tree(ps.points, all_ids);
  const bool has_neumann = ps.count(PointKind::NeumannBoundary) > 0;
  // Built lazily only because most runs are Dirichlet-only.
  std::unique_ptr<KdTree2d> interior_tree;
  if (has_neumann)
    interior_tree = std::make_unique<KdTree2d>(ps.points, interior_ids);

  CloudSet cs;
  cs.level_id = ps.level_id;
  cs.n_cloud = n_cloud;
  cs.cloud_of_point.assign(ps.size(), -1);
  for (int i = 0; i < ps.size(); ++i) {
    if (ps.kind[i] == PointKind::DirichletBoundary) continue;
    Cloud c;
    c.center = i;
    c.members = ps.kind[i] == PointKind::Interior ? all_tree.nearest(ps.points[i], n_cloud)
                                                  : interior_tree->nearest(ps.points[i], n_cloud);
    cs.cloud_of_point[i] = static_cast<int>(cs.clouds.size());
    cs.clouds.push_back(std::move(c));
  }
  return cs;
}

}  // namespace phsmg
