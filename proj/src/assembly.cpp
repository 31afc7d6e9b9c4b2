#include "phsmg/assembly.hpp"

#include <algorithm>

#include "phsmg/rbf.hpp"

namespace phsmg {

namespace {

std::vector<Eigen::Vector2d> gather(const PointSet& ps, const std::vector<int>& ids) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(ps.points[id]);
  return out;
}

}  // namespace

DiscreteProblem assemble_poisson(const PointSet& ps, const CloudSet& clouds,
                                 const ScalarField& source, const BoundaryData& bc,
                                 const AssemblyOptions& opts) {
  DiscreteProblem prob;
  prob.row_of.assign(ps.size(), -1);
  for (int i = 0; i < ps.size(); ++i)
    if (ps.kind[i] == PointKind::Interior) {
      prob.row_of[i] = static_cast<int>(prob.point_of.size());
      prob.point_of.push_back(i);
    }
  const int n = static_cast<int>(prob.point_of.size());
  if (n == 0) throw Error("assemble_poisson: no interior points");

  // Neumann values first: each is an affine function of interior unknowns,
  // obtained from its flux stencil. The stencil interpolates over the
  // interior cloud plus the boundary point itself, whose weight must be
  // usable as a pivot.
  std::vector<int> recovery_of(ps.size(), -1);
  for (int bp = 0; bp < ps.size(); ++bp) {
    if (ps.kind[bp] != PointKind::NeumannBoundary) continue;
    if (!bc.neumann_flux) throw Error("assemble_poisson: Neumann points need flux data");
    const Cloud& cloud = clouds.at(bp);

    auto nodes = gather(ps, cloud.members);
    nodes.push_back(ps.points[bp]);
    const LocalSystem sys(std::move(nodes), opts.phs_power, opts.degree, opts.rcond_floor);
    const Eigen::VectorXd q =
        sys.normal_derivative_weights(ps.points[bp], ps.normal[bp]);

    const int last = static_cast<int>(cloud.members.size());
    const double pivot = q[last];
    if (std::abs(pivot) <= 1e-14 * q.cwiseAbs().maxCoeff())
      throw Error("assemble_poisson: flux stencil at point " + std::to_string(bp) +
                  " gives its own value no weight");

    DiscreteProblem::Recovery rec;
    rec.point = bp;
    rec.offset = bc.neumann_flux(ps.points[bp]) / pivot;
    rec.weights.resize(last);
    for (int k = 0; k < last; ++k) {
      const int member = cloud.members[k];
      rec.rows.push_back(prob.row_of[member]);  // interior by construction
      rec.weights[k] = -q[k] / pivot;
    }
    recovery_of[bp] = static_cast<int>(prob.boundary_recovery.size());
    prob.boundary_recovery.push_back(std::move(rec));
  }

  std::vector<SparseOperator::Triplet> ts;
  ts.reserve(static_cast<size_t>(n) * clouds.n_cloud);
  prob.b.resize(n);

  for (int row = 0; row < n; ++row) {
    const int center = prob.point_of[row];
    const Cloud& cloud = clouds.at(center);
    const LocalSystem sys(gather(ps, cloud.members), opts.phs_power, opts.degree,
                          opts.rcond_floor);
    const Eigen::VectorXd w = sys.laplacian_weights(ps.points[center]);

    double rhs = source(ps.points[center]);
    for (size_t k = 0; k < cloud.members.size(); ++k) {
      const int member = cloud.members[k];
      switch (ps.kind[member]) {
        case PointKind::Interior:
          ts.emplace_back(row, prob.row_of[member], w[k]);
          break;
        case PointKind::DirichletBoundary:
          if (!bc.dirichlet)
            throw Error("assemble_poisson: Dirichlet points need boundary data");
          rhs -= w[k] * bc.dirichlet(ps.points[member]);
          break;
        case PointKind::NeumannBoundary: {
          const auto& rec = prob.boundary_recovery[recovery_of[member]];
          for (size_t m = 0; m < rec.rows.size(); ++m)
            ts.emplace_back(row, rec.rows[m], w[k] * rec.weights[m]);
          rhs -= w[k] * rec.offset;
          break;
        }
      }
    }
    prob.b[row] = rhs;
  }

  prob.A = SparseOperator::from_triplets(n, n, ts);

  if (opts.reorder) {
    const std::vector<int> new_of = rcm_ordering(prob.A);
    prob.A = prob.A.renumbered_symmetric(new_of);

    Eigen::VectorXd b2(n);
    std::vector<int> point_of2(n);
    for (int old = 0; old < n; ++old) {
      b2[new_of[old]] = prob.b[old];
      point_of2[new_of[old]] = prob.point_of[old];
    }
    prob.b = std::move(b2);
    prob.point_of = std::move(point_of2);
    for (int i = 0; i < ps.size(); ++i)
      if (prob.row_of[i] >= 0) prob.row_of[i] = new_of[prob.row_of[i]];
    for (auto& rec : prob.boundary_recovery)
      for (int& r : rec.rows) r = new_of[r];
  }
  return prob;
}

DiscreteProblem regularize_all_neumann(DiscreteProblem prob, const PointSet& ps) {
  if (ps.count(PointKind::DirichletBoundary) > 0)
    throw Error("regularize_all_neumann: problem has Dirichlet points");
  if (ps.count(PointKind::NeumannBoundary) == 0)
    throw Error("regularize_all_neumann: problem has no Neumann boundary");
  prob.regularized = true;
  return prob;
}

Eigen::VectorXd homogeneous_boundary_values(const DiscreteProblem& prob,
                                            const Eigen::VectorXd& x) {
  std::vector<int> col_of(prob.row_of.size(), -1);
  int n_boundary = 0;
  for (size_t i = 0; i < prob.row_of.size(); ++i)
    if (prob.row_of[i] < 0) col_of[i] = n_boundary++;

  Eigen::VectorXd vals = Eigen::VectorXd::Zero(n_boundary);
  for (const auto& rec : prob.boundary_recovery) {
    double v = 0.0;  // the offset carries flux data, which is zero here
    for (size_t k = 0; k < rec.rows.size(); ++k) v += rec.weights[k] * x[rec.rows[k]];
    vals[col_of[rec.point]] = v;
  }
  return vals;
}

}  // namespace phsmg
