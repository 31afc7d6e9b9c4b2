#include "phsmg/rbf.hpp"

#include <cmath>

namespace phsmg {

namespace {

double powi(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double phs_kernel(double r, int p) {
  if (p < 1) throw Error("phs_kernel: p must be at least 1");
  return powi(r, 2 * p + 1);
}

double phs_laplacian(double r, int p, int dim) {
  if (p < 1) throw Error("phs_laplacian: p must be at least 1");
  return (2 * p + 1) * (2 * p + dim - 1) * powi(r, 2 * p - 1);
}

std::vector<std::array<int, 2>> monomial_exponents(int degree) {
  if (degree < 0) throw Error("monomial_exponents: degree must be non-negative");
  std::vector<std::array<int, 2>> exps;
  exps.reserve((degree + 1) * (degree + 2) / 2);
  for (int total = 0; total <= degree; ++total)
    for (int ay = 0; ay <= total; ++ay) exps.push_back({total - ay, ay});
  return exps;
}

namespace {

double mono_value(const std::array<int, 2>& e, const Eigen::Vector2d& x) {
  return powi(x[0], e[0]) * powi(x[1], e[1]);
}

double mono_laplacian(const std::array<int, 2>& e, const Eigen::Vector2d& x) {
  const int a = e[0], b = e[1];
  double s = 0.0;
  if (a >= 2) s += a * (a - 1) * powi(x[0], a - 2) * powi(x[1], b);
  if (b >= 2) s += b * (b - 1) * powi(x[0], a) * powi(x[1], b - 2);
  return s;
}

Eigen::Vector2d mono_gradient(const std::array<int, 2>& e, const Eigen::Vector2d& x) {
  const int a = e[0], b = e[1];
  return {a > 0 ? a * powi(x[0], a - 1) * powi(x[1], b) : 0.0,
          b > 0 ? b * powi(x[0], a) * powi(x[1], b - 1) : 0.0};
}

}  // namespace

LocalSystem::LocalSystem(std::vector<Eigen::Vector2d> nodes, int phs_power, int degree,
                         double rcond_floor)
    : n_(static_cast<int>(nodes.size())),
      m_((degree + 1) * (degree + 2) / 2),
      p_(phs_power) {
  if (p_ < 1 || p_ > 3) throw Error("LocalSystem: phs_power must be 1, 2 or 3");
  if (degree < 0) throw Error("LocalSystem: degree must be non-negative");
  if (n_ < m_)
    throw Error("LocalSystem: " + std::to_string(n_) + " nodes cannot carry " +
                std::to_string(m_) + " polynomial constraints");
  exps_ = monomial_exponents(degree);

  shift_.setZero();
  for (const auto& x : nodes) shift_ += x;
  shift_ /= n_;
  scale_ = 0.0;
  for (const auto& x : nodes) scale_ = std::max(scale_, (x - shift_).norm());
  if (scale_ <= 0.0) throw Error("LocalSystem: all nodes coincide");

  scaled_.reserve(n_);
  for (const auto& x : nodes) scaled_.push_back((x - shift_) / scale_);

  D_.setZero(n_ + m_, n_ + m_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const double r = (scaled_[i] - scaled_[j]).norm();
      if (r == 0.0)
        throw Error("LocalSystem: coincident nodes " + std::to_string(i) + " and " +
                    std::to_string(j));
      const double v = phs_kernel(r, p_);
      D_(i, j) = v;
      D_(j, i) = v;
    }
  for (int j = 0; j < m_; ++j)
    for (int i = 0; i < n_; ++i) {
      const double v = mono_value(exps_[j], scaled_[i]);
      D_(i, n_ + j) = v;
      D_(n_ + j, i) = v;
    }

  lu_.compute(D_);
  // An exactly singular factor slips past the condition estimate (the zero
  // pivot poisons it), so reject zero pivots outright.
  if (lu_.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
    throw Error("LocalSystem: degenerate cloud, singular saddle system");
  rcond_ = lu_.rcond();
  if (!(rcond_ >= rcond_floor))
    throw Error("LocalSystem: degenerate cloud, reciprocal condition " +
                std::to_string(rcond_));
}

Eigen::VectorXd LocalSystem::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_ + m_) throw Error("LocalSystem::solve: rhs size mismatch");
  return lu_.solve(rhs);
}

Eigen::VectorXd LocalSystem::weights_from(const Eigen::VectorXd& rhs, double unit) const {
  // D is symmetric, so the weight row [B1 B2] = [L(Phi) L(P)] D^{-1} is
  // obtained from one linear solve; only the node block is kept.
  return lu_.solve(rhs).head(n_) * unit;
}

Eigen::VectorXd LocalSystem::interpolation_weights(const Eigen::Vector2d& xe) const {
  const Eigen::Vector2d e = to_scaled(xe);
  Eigen::VectorXd rhs(n_ + m_);
  for (int i = 0; i < n_; ++i) rhs[i] = phs_kernel((e - scaled_[i]).norm(), p_);
  for (int j = 0; j < m_; ++j) rhs[n_ + j] = mono_value(exps_[j], e);
  return weights_from(rhs, 1.0);
}

Eigen::VectorXd LocalSystem::laplacian_weights(const Eigen::Vector2d& xe) const {
  const Eigen::Vector2d e = to_scaled(xe);
  Eigen::VectorXd rhs(n_ + m_);
  for (int i = 0; i < n_; ++i) rhs[i] = phs_laplacian((e - scaled_[i]).norm(), p_);
  for (int j = 0; j < m_; ++j) rhs[n_ + j] = mono_laplacian(exps_[j], e);
  return weights_from(rhs, 1.0 / (scale_ * scale_));
}

Eigen::VectorXd LocalSystem::normal_derivative_weights(const Eigen::Vector2d& xe,
                                                       const Eigen::Vector2d& n) const {
  if (std::abs(n.norm() - 1.0) > 1e-9)
    throw Error("normal_derivative_weights: direction must be a unit vector");
  const Eigen::Vector2d e = to_scaled(xe);
  Eigen::VectorXd rhs(n_ + m_);
  for (int i = 0; i < n_; ++i) {
    const Eigen::Vector2d d = e - scaled_[i];
    const double r = d.norm();
    // grad phi = (2p+1) r^(2p-1) (x - x_i); finite at r = 0 for p >= 1.
    rhs[i] = (2 * p_ + 1) * powi(r, 2 * p_ - 1) * d.dot(n);
  }
  for (int j = 0; j < m_; ++j) rhs[n_ + j] = mono_gradient(exps_[j], e).dot(n);
  return weights_from(rhs, 1.0 / scale_);
}

}  // namespace phsmg
