#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace phsmg {

/// Closed-form benchmark solution T = cos(k pi x) cos(k pi y) with its
/// Poisson source lap(T) = -2 pi^2 k^2 T and boundary data.
struct ManufacturedCase {
  int wavenumber = 1;

  double value(const Eigen::Vector2d& x) const {
    const double kpi = wavenumber * M_PI;
    return std::cos(kpi * x[0]) * std::cos(kpi * x[1]);
  }

  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const {
    const double kpi = wavenumber * M_PI;
    return {-kpi * std::sin(kpi * x[0]) * std::cos(kpi * x[1]),
            -kpi * std::cos(kpi * x[0]) * std::sin(kpi * x[1])};
  }

  double source(const Eigen::Vector2d& x) const {
    const double kpi = wavenumber * M_PI;
    return -2.0 * kpi * kpi * value(x);
  }

  double flux(const Eigen::Vector2d& x, const Eigen::Vector2d& n) const {
    return gradient(x).dot(n);
  }
};

}  // namespace phsmg
