#include "phsmg/solver.hpp"

#include <chrono>
#include <cmath>

namespace phsmg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void project_zero_mean(Eigen::VectorXd& x) { x.array() -= x.mean(); }

void smooth_block(const DiscreteProblem& prob, Eigen::VectorXd& x,
                  const Eigen::VectorXd& b, const SmootherOptions& opts) {
  for (int s = 0; s < opts.sweeps; ++s) {
    sor_sweep(prob.A, x, b, opts.omega);
    if (prob.regularized) project_zero_mean(x);
  }
}

void coarse_solve(const DiscreteProblem& prob, Eigen::VectorXd& x,
                  const Eigen::VectorXd& b, const SmootherOptions& opts) {
  if (!opts.coarse_direct) {
    smooth_block(prob, x, b, opts);
    return;
  }
  // Least-squares rather than LU so the regularized (rank-deficient) case
  // stays well defined.
  x = prob.A.dense().colPivHouseholderQr().solve(b);
  if (prob.regularized) project_zero_mean(x);
}

}  // namespace

void LevelHierarchy::validate() const {
  if (levels.empty()) throw Error("LevelHierarchy: no levels");
  const size_t gaps = levels.size() - 1;
  if (restrictions.size() != gaps || prolongations.size() != gaps)
    throw Error("LevelHierarchy: transfer count does not match level count");
  for (size_t k = 0; k < gaps; ++k) {
    if (restrictions[k].matrix.rows() != levels[k].unknowns() ||
        restrictions[k].matrix.cols() != levels[k + 1].unknowns())
      throw Error("LevelHierarchy: restriction " + std::to_string(k) + " shape mismatch");
    if (prolongations[k].matrix.rows() != levels[k + 1].unknowns() ||
        prolongations[k].matrix.cols() != levels[k].unknowns())
      throw Error("LevelHierarchy: prolongation " + std::to_string(k) + " shape mismatch");
  }
}

double relative_residual(const SparseOperator& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double num = A.residual(x, b).lpNorm<1>();
  const double den = b.lpNorm<1>();
  return den > 0.0 ? num / den : num;
}

void sor_sweep(const SparseOperator& A, Eigen::VectorXd& x, const Eigen::VectorXd& b,
               double omega) {
  if (A.rows() != A.cols() || x.size() != A.rows() || b.size() != A.rows())
    throw Error("sor_sweep: shape mismatch");
  const auto& m = A.eigen();
  const int n = A.rows();
  for (int i = 0; i < n; ++i) {
    double diag = 0.0, acc = b[i];
    for (SparseOperator::Matrix::InnerIterator it(m, i); it; ++it) {
      if (static_cast<int>(it.col()) == i)
        diag = it.value();
      else
        acc -= it.value() * x[it.col()];
    }
    if (diag == 0.0)
      throw Error("sor_sweep: zero diagonal in row " + std::to_string(i));
    x[i] = (1.0 - omega) * x[i] + omega * acc / diag;
  }
}

void v_cycle(const LevelHierarchy& h, int level, const Eigen::VectorXd& b,
             Eigen::VectorXd& x, const SmootherOptions& opts) {
  const DiscreteProblem& prob = h.levels[level];
  if (level == 0) {
    coarse_solve(prob, x, b, opts);
    return;
  }

  smooth_block(prob, x, b, opts);

  // Restriction sees only interior residuals: the boundary equations were
  // condensed away, so their residuals are identically zero.
  const Eigen::VectorXd coarse_b = h.restrictions[level - 1].apply(prob.A.residual(x, b));
  const DiscreteProblem& coarse = h.levels[level - 1];
  Eigen::VectorXd correction = Eigen::VectorXd::Zero(coarse.unknowns());
  v_cycle(h, level - 1, coarse_b, correction, opts);

  // Corrections vanish at Dirichlet points but follow the flux recovery at
  // Neumann points, so those stencil members carry nonzero values up.
  if (coarse.boundary_recovery.empty())
    x += h.prolongations[level - 1].apply(correction);
  else
    x += h.prolongations[level - 1].apply(
        correction, homogeneous_boundary_values(coarse, correction));
  if (prob.regularized) project_zero_mean(x);

  smooth_block(prob, x, b, opts);
}

SolveReport solve_multilevel(const LevelHierarchy& h, const Eigen::VectorXd& b,
                             Eigen::VectorXd& x, const SolveOptions& opts) {
  h.validate();
  const auto t0 = Clock::now();
  const DiscreteProblem& fine = h.levels[h.finest()];

  x = Eigen::VectorXd::Zero(fine.unknowns());
  SolveReport rep;
  rep.residual_history.push_back(relative_residual(fine.A, x, b));
  rep.residual_l2.push_back(fine.A.residual(x, b).norm());

  while (rep.cycles < opts.max_cycles) {
    if (rep.residual_history.back() < opts.tol) {
      rep.converged = true;
      break;
    }
    v_cycle(h, h.finest(), b, x, opts.smoother);
    ++rep.cycles;
    rep.residual_history.push_back(relative_residual(fine.A, x, b));
    rep.residual_l2.push_back(fine.A.residual(x, b).norm());
    if (rep.residual_history.back() >
        opts.divergence_factor * std::max(rep.residual_history.front(), 1e-300)) {
      rep.diverged = true;
      break;
    }
  }
  rep.converged = rep.residual_history.back() < opts.tol;
  rep.constraint_residual = fine.constraint_residual(x);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport preconditioned_gmres(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
    const Eigen::VectorXd& b, Eigen::VectorXd& x, const SolveOptions& opts) {
  const auto t0 = Clock::now();
  const double b_norm1 = b.lpNorm<1>();
  const auto rel1 = [&](const Eigen::VectorXd& r) {
    return b_norm1 > 0.0 ? r.lpNorm<1>() / b_norm1 : r.lpNorm<1>();
  };

  x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;

  SolveReport rep;
  rep.residual_history.push_back(rel1(r));
  rep.residual_l2.push_back(r.norm());

  std::vector<Eigen::VectorXd> dirs, images;  // p_k and w_k = A p_k
  while (rep.cycles < opts.max_cycles) {
    if (rep.residual_history.back() < opts.tol) {
      rep.converged = true;
      break;
    }

    Eigen::VectorXd p = precondition(r);
    Eigen::VectorXd w = apply(p);
    if (opts.gmres_verbatim) {
      const Eigen::VectorXd w_frozen = w;
      for (size_t i = 0; i < dirs.size(); ++i) {
        const double beta = images[i].dot(w_frozen) / images[i].squaredNorm();
        p -= beta * dirs[i];
        w -= beta * images[i];
      }
    } else {
      // Two modified Gram-Schmidt passes: one pass leaves the image basis
      // losing orthogonality over long solves, which shows up as multi-
      // iteration residual plateaus.
      for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < dirs.size(); ++i) {
          const double beta = images[i].dot(w) / images[i].squaredNorm();
          p -= beta * dirs[i];
          w -= beta * images[i];
        }
    }

    const double w2 = w.squaredNorm();
    if (!(w2 > 0.0) || !std::isfinite(w2))
      throw Error("preconditioned_gmres: breakdown, preconditioned direction has "
                  "zero image");

    const double alpha =
        opts.gmres_verbatim ? w.dot(apply(r)) / w2 : w.dot(r) / w2;
    x += alpha * p;
    r -= alpha * w;
    dirs.push_back(std::move(p));
    images.push_back(std::move(w));

    ++rep.cycles;
    rep.residual_history.push_back(rel1(r));
    rep.residual_l2.push_back(r.norm());
    if (rep.residual_history.back() >
        opts.divergence_factor * std::max(rep.residual_history.front(), 1e-300)) {
      rep.diverged = true;
      break;
    }
  }
  rep.converged = rep.residual_history.back() < opts.tol;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport solve_ml_gmres(const LevelHierarchy& h, const Eigen::VectorXd& b,
                           Eigen::VectorXd& x, const SolveOptions& opts) {
  h.validate();
  const DiscreteProblem& fine = h.levels[h.finest()];
  SolveReport rep = preconditioned_gmres(
      [&](const Eigen::VectorXd& v) { return fine.A.apply(v); },
      [&](const Eigen::VectorXd& r) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(r.size());
        v_cycle(h, h.finest(), r, z, opts.smoother);
        return z;
      },
      b, x, opts);
  // The update directions are mean-free only to rounding; hand back the
  // zero-sum representative the regularized problem is defined over.
  if (fine.regularized) x.array() -= x.mean();
  rep.constraint_residual = fine.constraint_residual(x);
  return rep;
}

}  // namespace phsmg
