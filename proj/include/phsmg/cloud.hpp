#pragma once

#include <vector>

#include "phsmg/pointset.hpp"

namespace phsmg {

/// Interpolation stencil: the points whose values feed the local RBF fit
/// centred at one collocation node.
struct Cloud {
  int center = -1;
  std::vector<int> members;
};

/// Number of bivariate monomials of total degree <= degree.
int monomial_count(int degree);

/// Stencil size: ceil(ratio * monomial_count(degree)), the oversampling that
/// keeps the local fits well posed.
int cloud_size(int degree, double ratio = 2.0);

/// Clouds for every collocation node that carries an equation. Interior
/// centers take their n_cloud nearest points of any kind (self included);
/// Neumann boundary centers take their n_cloud nearest interior points, so
/// boundary eliminations never couple boundary values to each other.
/// Dirichlet points carry data, not equations, and get no cloud.
struct CloudSet {
  int level_id = 0;
  int n_cloud = 0;
  std::vector<Cloud> clouds;
  std::vector<int> cloud_of_point;  // index into clouds, -1 if none

  const Cloud& at(int point) const {
    if (cloud_of_point[point] < 0)
      throw Error("CloudSet: point " + std::to_string(point) + " has no cloud");
    return clouds[cloud_of_point[point]];
  }
};

CloudSet build_clouds(const PointSet& ps, int n_cloud);

}  // namespace phsmg
