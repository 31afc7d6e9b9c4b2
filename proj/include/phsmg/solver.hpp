#pragma once

#include <functional>

#include "phsmg/transfer.hpp"

// Multilevel solution of the condensed Poisson systems. Levels hold
// independently assembled operators on unrelated point sets; corrections move
// between them through RBF interpolation both ways. The V-cycle smooths with
// SOR in the stored (bandwidth-reduced) ordering and can serve either as the
// solver itself or as the preconditioner of a least-squares GMRES iteration.

namespace phsmg {

struct SmootherOptions {
  double omega = 1.4;
  int sweeps = 5;       // pre- and post-smoothing sweeps per level
  bool coarse_direct = false;  // dense least-squares solve on the coarsest level
};

struct SolveOptions {
  SmootherOptions smoother;
  double tol = 1e-10;            // on the relative L1 residual
  int max_cycles = 100;
  double divergence_factor = 1e6;
  bool gmres_verbatim = false;   // see solve_ml_gmres
};

/// Coarsest-to-finest stack of problems plus the transfers between
/// neighbouring levels; restrictions[k] maps level k+1 to level k,
/// prolongations[k] maps level k to level k+1.
struct LevelHierarchy {
  std::vector<DiscreteProblem> levels;
  std::vector<TransferOperator> restrictions;
  std::vector<TransferOperator> prolongations;

  int finest() const { return static_cast<int>(levels.size()) - 1; }
  void validate() const;
};

struct SolveReport {
  std::vector<double> residual_history;  // relative L1, entry 0 before any cycle
  std::vector<double> residual_l2;       // plain 2-norms, same indexing
  int cycles = 0;
  bool converged = false;
  bool diverged = false;
  double wall_seconds = 0.0;
  double constraint_residual = 0.0;  // |sum x| / n on regularized problems
};

/// Relative L1 residual |b - Ax|_1 / |b|_1; absolute when b = 0.
double relative_residual(const SparseOperator& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b);

/// One forward SOR sweep in storage order. Every diagonal must be present
/// and nonzero.
void sor_sweep(const SparseOperator& A, Eigen::VectorXd& x, const Eigen::VectorXd& b,
               double omega);

/// One V-cycle for the system at `level` with right-hand side b, updating x
/// in place. Residuals restrict with zero boundary values (the condensed
/// boundary equations hold exactly); corrections prolongate with zero values
/// at Dirichlet points and flux-recovered values at Neumann points.
/// Regularized levels are projected to zero mean after every sweep and after
/// every correction.
void v_cycle(const LevelHierarchy& h, int level, const Eigen::VectorXd& b,
             Eigen::VectorXd& x, const SmootherOptions& opts);

/// Stationary multilevel iteration from x = 0: V-cycles until the relative
/// residual drops below tol, max_cycles is hit, or the residual grows past
/// divergence_factor times its initial value.
SolveReport solve_multilevel(const LevelHierarchy& h, const Eigen::VectorXd& b,
                             Eigen::VectorXd& x, const SolveOptions& opts = {});

/// Minimal-residual iteration with a linear operator preconditioner:
/// directions are preconditioned residuals, kept mutually orthogonal in the
/// A^T A inner product by modified Gram-Schmidt, and each step length
/// minimizes |r|_2, so the 2-norm history never increases.
SolveReport preconditioned_gmres(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
    const Eigen::VectorXd& b, Eigen::VectorXd& x, const SolveOptions& opts = {});

/// GMRES accelerated by one V-cycle per iteration as the preconditioner.
/// gmres_verbatim switches to a variant kept for comparison: classical
/// Gram-Schmidt coefficients measured against the unorthogonalized direction
/// and a step length computed from A r instead of r. The default
/// least-squares form is the one with the monotone residual guarantee.
SolveReport solve_ml_gmres(const LevelHierarchy& h, const Eigen::VectorXd& b,
                           Eigen::VectorXd& x, const SolveOptions& opts = {});

}  // namespace phsmg
