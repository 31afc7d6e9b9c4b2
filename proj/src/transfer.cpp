#include "phsmg/transfer.hpp"

#include <memory>

#include "phsmg/kdtree.hpp"
#include "phsmg/rbf.hpp"

namespace phsmg {

TransferOperator build_transfer(const PointSet& src_ps, const DiscreteProblem& src,
                                const PointSet& dst_ps, const DiscreteProblem& dst,
                                const TransferOptions& opts) {
  const int m = monomial_count(opts.degree);
  if (opts.n_cloud < m)
    throw Error("build_transfer: n_cloud " + std::to_string(opts.n_cloud) +
                " is below the " + std::to_string(m) + " polynomial constraints");
  if (src_ps.size() < opts.n_cloud)
    throw Error("build_transfer: source level has " + std::to_string(src_ps.size()) +
                " points, need " + std::to_string(opts.n_cloud));

  // Clouds draw from every source point. Near the boundary this pins the
  // interpolant to sites where the transferred field is known (zero, or the
  // flux recovery), where interior-only clouds would extrapolate one-sidedly.
  std::vector<int> all_ids(src_ps.size());
  for (int i = 0; i < src_ps.size(); ++i) all_ids[i] = i;
  const KdTree2d tree(src_ps.points, std::move(all_ids));

  std::vector<int> boundary_col(src_ps.size(), -1);
  int n_boundary = 0;
  for (int i = 0; i < src_ps.size(); ++i)
    if (src.row_of[i] < 0) boundary_col[i] = n_boundary++;

  TransferOperator op;
  op.src_level = src_ps.level_id;
  op.dst_level = dst_ps.level_id;

  std::vector<SparseOperator::Triplet> ts_int, ts_bnd;
  ts_int.reserve(static_cast<size_t>(dst.unknowns()) * opts.n_cloud);
  for (int row = 0; row < dst.unknowns(); ++row) {
    const Eigen::Vector2d& xe = dst_ps.points[dst.point_of[row]];

    // A cloud that happens to sample a degenerate configuration (all nodes
    // on few lines, say) grows until the fit is well posed again.
    int n_cloud = opts.n_cloud;
    std::unique_ptr<LocalSystem> sys;
    std::vector<int> members;
    for (;;) {
      members = tree.nearest(xe, n_cloud);
      std::vector<Eigen::Vector2d> nodes;
      nodes.reserve(members.size());
      for (int id : members) nodes.push_back(src_ps.points[id]);
      try {
        sys = std::make_unique<LocalSystem>(std::move(nodes), opts.phs_power,
                                            opts.degree, opts.rcond_floor);
        break;
      } catch (const Error&) {
        if (n_cloud >= std::min(4 * opts.n_cloud, src_ps.size())) throw;
        n_cloud = std::min(n_cloud + opts.n_cloud / 2, src_ps.size());
      }
    }
    if (sys->to_scaled(xe).norm() > 1.0 + 1e-12) ++op.extrapolated;

    const Eigen::VectorXd w = sys->interpolation_weights(xe);
    for (size_t k = 0; k < members.size(); ++k) {
      const int id = members[k];
      if (src.row_of[id] >= 0)
        ts_int.emplace_back(row, src.row_of[id], w[k]);
      else
        ts_bnd.emplace_back(row, boundary_col[id], w[k]);
    }
  }
  op.matrix = SparseOperator::from_triplets(dst.unknowns(), src.unknowns(), ts_int);
  op.boundary = SparseOperator::from_triplets(dst.unknowns(), n_boundary, ts_bnd);
  return op;
}

}  // namespace phsmg
