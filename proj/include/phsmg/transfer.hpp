#pragma once

#include "phsmg/assembly.hpp"

namespace phsmg {

struct TransferOptions {
  int phs_power = 1;
  int degree = 3;    // polynomial degree of the transfer interpolants
  int n_cloud = 20;  // source nodes per destination point
  /// Fits this marginal lose their interpolation bound and the level cycle
  /// with them; the cloud grows until the fit clears the floor.
  double rcond_floor = 1e-8;
};

/// Interpolation from one level's field values to another's. Source clouds
/// span interior and boundary points alike: the fields being moved vanish at
/// eliminated boundary equations (residuals, Dirichlet corrections) or follow
/// the flux recovery (Neumann corrections), and pinning those sites keeps the
/// near-boundary rows interpolating instead of extrapolating. The weights are
/// stored split by source-point kind.
struct TransferOperator {
  SparseOperator matrix;    // rows: destination unknowns, cols: source unknowns
  SparseOperator boundary;  // cols: source boundary points in point-id order
  int src_level = 0;
  int dst_level = 0;
  /// Destinations outside their source stencil's circumscribed radius;
  /// extrapolation is permitted but worth watching in logs.
  int extrapolated = 0;

  /// Transfer of a field that vanishes at the source boundary.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix.apply(x); }

  /// Transfer with explicit source boundary values.
  Eigen::VectorXd apply(const Eigen::VectorXd& x, const Eigen::VectorXd& xb) const {
    return matrix.apply(x) + boundary.apply(xb);
  }
};

TransferOperator build_transfer(const PointSet& src_ps, const DiscreteProblem& src,
                                const PointSet& dst_ps, const DiscreteProblem& dst,
                                const TransferOptions& opts = {});

}  // namespace phsmg
