#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "phsmg/pointset.hpp"

using namespace phsmg;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

double min_pairwise_distance(const PointSet& ps) {
  double dmin = 1e300;
  for (int i = 0; i < ps.size(); ++i)
    for (int j = i + 1; j < ps.size(); ++j)
      dmin = std::min(dmin, (ps.points[i] - ps.points[j]).norm());
  return dmin;
}

}  // namespace

TEST_SUITE_BEGIN("pointset");

TEST_CASE("average spacing is sqrt(area/n)") {
  PointSet ps = testutil::interior_pointset(testutil::scattered_points(100, 1));
  CHECK(average_spacing(ps) == doctest::Approx(0.1).epsilon(1e-12));

  PointSet one = testutil::interior_pointset({{0.5, 0.5}});
  CHECK(average_spacing(one) == doctest::Approx(1.0).epsilon(1e-12));

  PointSet ann;
  ann.geometry = Geometry::annulus(0.5, 1.0);
  ann.points.assign(2356, Eigen::Vector2d::Zero());
  ann.kind.assign(2356, PointKind::Interior);
  ann.normal.assign(2356, Eigen::Vector2d::Zero());
  CHECK(average_spacing(ann) == doctest::Approx(0.0316227).epsilon(1e-3));
}

TEST_CASE("square generation hits the count band with valid tags and normals") {
  const PointSet ps = generate_pointset(Geometry::square(), 98, 0);
  CHECK(ps.size() >= 89);
  CHECK(ps.size() <= 107);
  CHECK(ps.interior_count() > 0);
  CHECK(ps.count(PointKind::DirichletBoundary) > 0);

  for (int i = 0; i < ps.size(); ++i) {
    CAPTURE(i);
    CHECK(ps.geometry.contains(ps.points[i]));
    if (ps.is_boundary(i)) {
      CHECK(ps.geometry.boundary_distance(ps.points[i]) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(ps.normal[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
      // Unit-square normals are axis-aligned.
      CHECK(std::abs(ps.normal[i][0]) + std::abs(ps.normal[i][1]) ==
            doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(ps.normal[i] == Eigen::Vector2d::Zero());
    }
  }

  const double delta = 0.7 * std::sqrt(ps.geometry.area() / 98);
  CHECK(min_pairwise_distance(ps) >= delta * (1.0 - 1e-12));
}

TEST_CASE("generation is deterministic in the seed") {
  const PointSet a = generate_pointset(Geometry::square(), 607, 42);
  const PointSet b = generate_pointset(Geometry::square(), 607, 42);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK(a.points[i] == b.points[i]);

  const PointSet c = generate_pointset(Geometry::square(), 607, 43);
  bool identical = a.size() == c.size();
  if (identical)
    for (int i = 0; i < a.size(); ++i)
      if (a.points[i] != c.points[i]) {
        identical = false;
        break;
      }
  CHECK_FALSE(identical);
}

TEST_CASE("annulus points stay in the ring and normals are radial") {
  const Geometry g = Geometry::annulus(0.5, 1.0);
  const PointSet ps = generate_pointset(g, 188, 7);
  CHECK(std::abs(ps.size() - 188) <= 19);
  for (int i = 0; i < ps.size(); ++i) {
    const double r = ps.points[i].norm();
    CHECK(r >= 0.5 - 1e-12);
    CHECK(r <= 1.0 + 1e-12);
    if (ps.is_boundary(i)) {
      const Eigen::Vector2d radial = ps.points[i] / r;
      const double sign = r > 0.75 ? 1.0 : -1.0;
      CHECK((ps.normal[i] - sign * radial).norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("square-with-hole avoids the hole and tags hole normals inward") {
  const Geometry g = Geometry::square_with_hole(0.2);
  const PointSet ps = generate_pointset(g, 640, 3);
  const Eigen::Vector2d c(0.5, 0.5);
  int hole_boundary = 0;
  for (int i = 0; i < ps.size(); ++i) {
    const double rh = (ps.points[i] - c).norm();
    CHECK(rh >= 0.2 - 1e-12);
    if (ps.is_boundary(i) && rh < 0.25) {
      ++hole_boundary;
      CHECK((ps.normal[i] + (ps.points[i] - c) / rh).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  CHECK(hole_boundary >= 8);
}

TEST_CASE("too-small targets are rejected") {
  CHECK_THROWS_AS(generate_pointset(Geometry::square(), 10, 0), Error);
}

TEST_CASE("retagging flips boundary kinds only") {
  PointSet ps = generate_pointset(Geometry::square(), 98, 0);
  const int interior = ps.interior_count();
  ps = with_boundary_kind(std::move(ps), PointKind::NeumannBoundary);
  CHECK(ps.interior_count() == interior);
  CHECK(ps.count(PointKind::DirichletBoundary) == 0);
  CHECK(ps.count(PointKind::NeumannBoundary) == ps.size() - interior);
}

TEST_CASE("save and load round-trip coordinates, tags and normals") {
  PointSet ps = generate_pointset(Geometry::annulus(0.5, 1.0), 90, 0);
  ps = with_boundary_kind(std::move(ps), PointKind::NeumannBoundary);
  const auto path = temp_file("phsmg_roundtrip.txt");
  save_pointset(ps, path);
  const PointSet back = load_pointset(path);

  REQUIRE(back.size() == ps.size());
  CHECK(back.geometry == ps.geometry);
  for (int i = 0; i < ps.size(); ++i) {
    CHECK((back.points[i] - ps.points[i]).norm() <= 1e-15);
    CHECK(back.kind[i] == ps.kind[i]);
    CHECK((back.normal[i] - ps.normal[i]).norm() <= 1e-15);
  }
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects malformed input") {
  const auto path = temp_file("phsmg_bad.txt");
  auto write = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };

  SUBCASE("malformed header") {
    write("points 2 geometry square\n0.5 0.5 i\n0.25 0.5 i\n");
    CHECK_THROWS_AS(load_pointset(path), Error);
  }
  SUBCASE("wrong count") {
    write("npoints 3 geometry square\n0.5 0.5 i\n0.25 0.5 i\n");
    CHECK_THROWS_AS(load_pointset(path), Error);
  }
  SUBCASE("boundary point missing normal") {
    write("npoints 2 geometry square\n0.5 0.5 i\n0 0.5 d\n");
    CHECK_THROWS_AS(load_pointset(path), Error);
  }
  SUBCASE("duplicate points") {
    write("npoints 2 geometry square\n0.5 0.5 i\n0.5 0.5 i\n");
    try {
      load_pointset(path);
      FAIL("expected a duplicate-point error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
  }
  SUBCASE("point outside the domain") {
    write("npoints 1 geometry square\n1.5 0.5 i\n");
    CHECK_THROWS_AS(load_pointset(path), Error);
  }
  SUBCASE("unknown tag") {
    write("npoints 1 geometry square\n0.5 0.5 q\n");
    CHECK_THROWS_AS(load_pointset(path), Error);
  }
  std::filesystem::remove(path);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto path = temp_file("phsmg_comments.txt");
  {
    std::ofstream out(path);
    out << "# header comment\n\nnpoints 2 geometry square # trailing\n"
           "0.5 0.5 i\n# between\n0 0.25 nm -1 0\n";
  }
  const PointSet ps = load_pointset(path);
  REQUIRE(ps.size() == 2);
  CHECK(ps.kind[0] == PointKind::Interior);
  CHECK(ps.kind[1] == PointKind::NeumannBoundary);
  CHECK(ps.normal[1] == Eigen::Vector2d(-1, 0));
  std::filesystem::remove(path);
}

TEST_SUITE_END();
