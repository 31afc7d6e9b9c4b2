#include <doctest.h>

#include "helpers.hpp"
#include "phsmg/transfer.hpp"

using namespace phsmg;

namespace {

// Transfers only need the row maps of the two problems, so a zero-data
// assembly is enough.
DiscreteProblem zero_problem(const PointSet& ps, const CloudSet& clouds) {
  const auto zero = [](const Eigen::Vector2d&) { return 0.0; };
  return assemble_poisson(ps, clouds, zero, {zero, zero});
}

struct Level {
  PointSet ps;
  CloudSet clouds;
  DiscreteProblem prob;
};

Level make_level(int n_target, unsigned seed) {
  Level lv;
  lv.ps = generate_pointset(Geometry::square(), n_target, seed);
  lv.clouds = build_clouds(lv.ps, cloud_size(3));
  lv.prob = zero_problem(lv.ps, lv.clouds);
  return lv;
}

Eigen::VectorXd sample(const Level& lv, const std::function<double(const Eigen::Vector2d&)>& f) {
  Eigen::VectorXd v(lv.prob.unknowns());
  for (int r = 0; r < v.size(); ++r) v[r] = f(lv.ps.points[lv.prob.point_of[r]]);
  return v;
}

// Boundary-point samples in point-id order, the boundary block's columns.
Eigen::VectorXd sample_boundary(const Level& lv,
                                const std::function<double(const Eigen::Vector2d&)>& f) {
  std::vector<double> v;
  for (int i = 0; i < lv.ps.size(); ++i)
    if (lv.prob.row_of[i] < 0) v.push_back(f(lv.ps.points[i]));
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
}

}  // namespace

TEST_SUITE_BEGIN("transfer");

TEST_CASE("transfer onto the source level is the identity") {
  const Level lv = make_level(169, 21);
  const TransferOperator t = build_transfer(lv.ps, lv.prob, lv.ps, lv.prob);
  REQUIRE(t.matrix.rows() == lv.prob.unknowns());
  REQUIRE(t.matrix.cols() == lv.prob.unknowns());
  // Interpolation is cardinal at its own nodes: unit weight on the matching
  // source point, nothing anywhere else, including the boundary block.
  const Eigen::MatrixXd d = t.matrix.dense();
  CHECK((d - Eigen::MatrixXd::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(t.boundary.dense().cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("transfers reproduce the interpolation degree both ways") {
  const Level coarse = make_level(169, 22);
  const Level fine = make_level(607, 23);
  const TransferOperator up = build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob);
  const TransferOperator down = build_transfer(fine.ps, fine.prob, coarse.ps, coarse.prob);
  CHECK(up.src_level == coarse.ps.level_id);
  CHECK(up.dst_level == fine.ps.level_id);
  // Clouds near the wall must lean on boundary sites, not extrapolate.
  CHECK(up.boundary.nonzeros() > 0);
  CHECK(down.boundary.nonzeros() > 0);

  const std::vector<std::function<double(const Eigen::Vector2d&)>> polys = {
      [](const Eigen::Vector2d&) { return 1.0; },
      [](const Eigen::Vector2d& x) { return 1.0 + 2.0 * x[0] - 3.0 * x[1]; },
      [](const Eigen::Vector2d& x) { return x[0] * x[1] - x[1] * x[1]; },
      [](const Eigen::Vector2d& x) { return x[0] * x[0] * x[0] - 2.0 * x[0] * x[1] * x[1]; },
  };
  for (size_t k = 0; k < polys.size(); ++k) {
    CAPTURE(k);
    const Eigen::VectorXd fu =
        up.apply(sample(coarse, polys[k]), sample_boundary(coarse, polys[k]));
    CHECK((fu - sample(fine, polys[k])).cwiseAbs().maxCoeff() <= 1e-9);
    const Eigen::VectorXd fd =
        down.apply(sample(fine, polys[k]), sample_boundary(fine, polys[k]));
    CHECK((fd - sample(coarse, polys[k])).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("smooth fields cross levels at interpolation accuracy") {
  const Level coarse = make_level(169, 24);
  const Level fine = make_level(607, 25);
  const TransferOperator up = build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob);

  const auto f = [](const Eigen::Vector2d& x) {
    return std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
  };
  const Eigen::VectorXd diff =
      (up.apply(sample(coarse, f), sample_boundary(coarse, f)) - sample(fine, f))
          .cwiseAbs();
  // Cubic interpolation from spacing 0.08, measured at mean 6.1e-5 and
  // max 3.9e-4; caps carry a 3x margin.
  CHECK(diff.mean() <= 2e-4);
  CHECK(diff.maxCoeff() <= 1.2e-3);
}

TEST_CASE("fields vanishing on the boundary use the short apply") {
  const Level coarse = make_level(169, 24);
  const Level fine = make_level(607, 25);
  const TransferOperator up = build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob);
  // (1 - x) x (1 - y) y is zero on the unit square's edge.
  const auto f = [](const Eigen::Vector2d& x) {
    return (1.0 - x[0]) * x[0] * (1.0 - x[1]) * x[1];
  };
  const Eigen::VectorXd with_zeros = up.apply(
      sample(coarse, f), Eigen::VectorXd::Zero(up.boundary.cols()));
  CHECK((up.apply(sample(coarse, f)) - with_zeros).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rebuilding a transfer is bit-identical") {
  const Level coarse = make_level(98, 26);
  const Level fine = make_level(169, 27);
  const TransferOperator a = build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob);
  const TransferOperator b = build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob);
  REQUIRE(a.matrix.nonzeros() == b.matrix.nonzeros());
  CHECK((a.matrix.dense() - b.matrix.dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.boundary.dense() - b.boundary.dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.extrapolated == b.extrapolated);
}

TEST_CASE("degenerate clouds grow until the fit is well posed") {
  // Four rows of collinear sites. The destination sits between the middle
  // rows, so every cloud of 50 or fewer sources spans at most three lines,
  // and a cubic times the three line equations witnesses the degeneracy;
  // the build must keep growing past it and still reproduce cubics.
  std::vector<Eigen::Vector2d> src_pts;
  for (double y : {0.0, 0.5, 0.6, 1.05})
    for (int i = 0; i < 20; ++i) src_pts.push_back({0.05 * i, y});

  PointSet src;
  src.geometry = Geometry::square();
  src.points = src_pts;
  src.kind.assign(src_pts.size(), PointKind::Interior);
  src.normal.assign(src_pts.size(), Eigen::Vector2d::Zero());
  const int n = static_cast<int>(src_pts.size());
  const DiscreteProblem src_prob = testutil::synthetic_problem(
      Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));

  PointSet dst = src;
  dst.points = {{0.475, 0.55}};
  dst.kind = {PointKind::Interior};
  dst.normal = {Eigen::Vector2d::Zero()};
  const DiscreteProblem dst_prob = testutil::synthetic_problem(
      Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1));

  const TransferOperator t = build_transfer(src, src_prob, dst, dst_prob);
  const auto cubic = [](const Eigen::Vector2d& x) {
    return 1.0 + x[0] - 2.0 * x[1] + 0.5 * x[0] * x[0] * x[1] - x[1] * x[1] * x[1];
  };
  Eigen::VectorXd xs(n);
  for (int i = 0; i < n; ++i) xs[i] = cubic(src_pts[i]);
  const Eigen::VectorXd got = t.apply(xs);
  CHECK(std::abs(got[0] - cubic(dst.points[0])) <= 1e-9);
}

TEST_CASE("impossible stencil requests are rejected") {
  const Level coarse = make_level(98, 28);
  const Level fine = make_level(169, 29);

  TransferOptions tiny;
  tiny.n_cloud = monomial_count(tiny.degree) - 1;
  CHECK_THROWS_AS(build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob, tiny), Error);

  TransferOptions huge;
  huge.n_cloud = coarse.ps.size() + 1;
  CHECK_THROWS_AS(build_transfer(coarse.ps, coarse.prob, fine.ps, fine.prob, huge), Error);
}

TEST_SUITE_END();
