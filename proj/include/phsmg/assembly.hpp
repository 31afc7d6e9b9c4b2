#pragma once

#include <functional>

#include "phsmg/cloud.hpp"
#include "phsmg/sparse.hpp"

namespace phsmg {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;

/// Boundary data for the Poisson problem: Dirichlet values and Neumann
/// normal-flux values, each sampled at the tagged boundary points.
struct BoundaryData {
  ScalarField dirichlet;
  ScalarField neumann_flux;
};

struct AssemblyOptions {
  int phs_power = 1;
  int degree = 3;
  double rcond_floor = 1e-12;
  bool reorder = true;  // reverse Cuthill-McKee
};

/// Square system over the interior unknowns after boundary condensation.
/// Eliminated Neumann values are recoverable as affine functions of the
/// unknowns; row_of/point_of map between point ids and matrix rows.
struct DiscreteProblem {
  SparseOperator A;
  Eigen::VectorXd b;
  std::vector<int> point_of;  // row -> point id
  std::vector<int> row_of;    // point id -> row, -1 for boundary points

  struct Recovery {
    int point = -1;
    std::vector<int> rows;   // unknown rows feeding this boundary value
    Eigen::VectorXd weights;
    double offset = 0.0;     // flux-data contribution

    double evaluate(const Eigen::VectorXd& x) const {
      double v = offset;
      for (size_t k = 0; k < rows.size(); ++k) v += weights[k] * x[rows[k]];
      return v;
    }
  };
  std::vector<Recovery> boundary_recovery;  // one per Neumann point

  /// Zero-sum constraint active (all-Neumann problems only); the solvers
  /// keep iterates mean-free and report |sum x| / n alongside the residual.
  bool regularized = false;

  int unknowns() const { return A.rows(); }
  double constraint_residual(const Eigen::VectorXd& x) const {
    return regularized ? std::abs(x.sum()) / std::max<int>(1, x.size()) : 0.0;
  }
};

/// Collocate lap(u) = source at every interior point and condense boundary
/// values. Dirichlet members move to the right-hand side;
/// each Neumann value is eliminated through its flux stencil: the stencil is
/// built on the point's interior-only cloud plus the point itself, the
/// discrete flux equation is solved for the boundary value (dividing by the
/// stencil's own-point weight), and the resulting affine form is substituted
/// into every interior equation and retained in boundary_recovery.
DiscreteProblem assemble_poisson(const PointSet& ps, const CloudSet& clouds,
                                 const ScalarField& source, const BoundaryData& bc,
                                 const AssemblyOptions& opts = {});

/// Mark an all-Neumann problem as zero-sum regularized. The singular system
/// keeps its matrix; solvers enforce sum(x) = 0 by projection and report the
/// constraint residual. Errors if any Dirichlet point is present.
DiscreteProblem regularize_all_neumann(DiscreteProblem prob, const PointSet& ps);

/// Boundary values implied by x under homogeneous boundary data: zero at
/// Dirichlet points, the recovery stencil's linear part at Neumann points.
/// One entry per boundary point, in point-id order (the column ordering of
/// TransferOperator::boundary). Used to carry corrections across levels.
Eigen::VectorXd homogeneous_boundary_values(const DiscreteProblem& prob,
                                            const Eigen::VectorXd& x);

}  // namespace phsmg
