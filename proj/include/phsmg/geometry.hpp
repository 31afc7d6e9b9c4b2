#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace phsmg {

/// Domain error with a human-readable message; thrown by every module.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class GeometryKind { Square, Annulus, SquareWithHole };

/// Planar benchmark domain: the unit square, an origin-centered annulus,
/// or the unit square minus a circular hole.
struct Geometry {
  GeometryKind kind = GeometryKind::Square;
  double inner_radius = 0.5;           // annulus only
  double outer_radius = 1.0;           // annulus only
  double hole_radius = 0.2;            // square-with-hole only
  Eigen::Vector2d hole_center{0.5, 0.5};

  static Geometry square();
  static Geometry annulus(double inner = 0.5, double outer = 1.0);
  static Geometry square_with_hole(double radius = 0.2);

  double area() const;

  /// True when x lies in the closed domain (boundary included).
  bool contains(const Eigen::Vector2d& x) const;

  /// Distance from x to the nearest boundary curve (0 on the boundary).
  double boundary_distance(const Eigen::Vector2d& x) const;

  /// Identifier used in point-set file headers ("square", "annulus", ...).
  std::string name() const;
};

bool operator==(const Geometry& a, const Geometry& b);

}  // namespace phsmg
