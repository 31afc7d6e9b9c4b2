#include "phsmg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace phsmg {

Geometry Geometry::square() { return Geometry{GeometryKind::Square}; }

Geometry Geometry::annulus(double inner, double outer) {
  if (!(inner > 0) || !(outer > inner))
    throw Error("annulus requires 0 < inner_radius < outer_radius");
  Geometry g;
  g.kind = GeometryKind::Annulus;
  g.inner_radius = inner;
  g.outer_radius = outer;
  return g;
}

Geometry Geometry::square_with_hole(double radius) {
  if (!(radius > 0) || !(radius < 0.5))
    throw Error("square_with_hole requires 0 < hole_radius < 0.5");
  Geometry g;
  g.kind = GeometryKind::SquareWithHole;
  g.hole_radius = radius;
  return g;
}

double Geometry::area() const {
  switch (kind) {
    case GeometryKind::Square: return 1.0;
    case GeometryKind::Annulus:
      return M_PI * (outer_radius * outer_radius - inner_radius * inner_radius);
    case GeometryKind::SquareWithHole:
      return 1.0 - M_PI * hole_radius * hole_radius;
  }
  return 0.0;
}

namespace {

double square_boundary_distance(const Eigen::Vector2d& x) {
  const double dx = std::min(x[0], 1.0 - x[0]);
  const double dy = std::min(x[1], 1.0 - x[1]);
  return std::min(dx, dy);
}

bool inside_unit_square(const Eigen::Vector2d& x) {
  return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 && x[1] <= 1.0;
}

}  // namespace

bool Geometry::contains(const Eigen::Vector2d& x) const {
  switch (kind) {
    case GeometryKind::Square:
      return inside_unit_square(x);
    case GeometryKind::Annulus: {
      const double r = x.norm();
      return r >= inner_radius && r <= outer_radius;
    }
    case GeometryKind::SquareWithHole:
      return inside_unit_square(x) && (x - hole_center).norm() >= hole_radius;
  }
  return false;
}

double Geometry::boundary_distance(const Eigen::Vector2d& x) const {
  switch (kind) {
    case GeometryKind::Square:
      return std::abs(square_boundary_distance(x));
    case GeometryKind::Annulus: {
      const double r = x.norm();
      return std::min(std::abs(r - inner_radius), std::abs(outer_radius - r));
    }
    case GeometryKind::SquareWithHole: {
      const double ds = std::abs(square_boundary_distance(x));
      const double dh = std::abs((x - hole_center).norm() - hole_radius);
      return std::min(ds, dh);
    }
  }
  return 0.0;
}

std::string Geometry::name() const {
  switch (kind) {
    case GeometryKind::Square: return "square";
    case GeometryKind::Annulus: return "annulus";
    case GeometryKind::SquareWithHole: return "square_with_hole";
  }
  return "unknown";
}

bool operator==(const Geometry& a, const Geometry& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GeometryKind::Square: return true;
    case GeometryKind::Annulus:
      return a.inner_radius == b.inner_radius && a.outer_radius == b.outer_radius;
    case GeometryKind::SquareWithHole:
      return a.hole_radius == b.hole_radius && a.hole_center == b.hole_center;
  }
  return false;
}

}  // namespace phsmg
