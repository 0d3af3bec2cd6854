#include "sci/sci_operator.hpp"
#include "sci/theory.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

using namespace sci;
using test::Mat;
using test::Vec;

using Operator = SciOperator<double>;

TEST_CASE("H and its adjoint match the dense matrix")
{
  for (CubeDims d : {CubeDims{2, 2, 2}, CubeDims{3, 3, 3}, CubeDims{4, 4, 4}, CubeDims{5, 3, 2}}) {
    CAPTURE(d.nx);
    Cube const masks = test::gaussian_cube(d, 100 + d.nx);
    Operator   op(masks);
    Mat const  h = test::dense_sensing(masks);
    Cube const x = test::gaussian_cube(d, 200);
    Frame const y = test::random_frame(d.nx, d.ny, 300);

    CHECK(test::rel(test::stack_columns(apply_H(op, x)), h * test::stack_cube(x)) <= 1e-12);
    CHECK(test::rel(test::stack_cube(apply_Ht(op, y)), h.transpose() * test::stack_columns(y)) <= 1e-12);
    CHECK((build_dense(op) - h).cwiseAbs().maxCoeff() == 0.0);
    Vec const rr = (h * h.transpose()).diagonal();
    CHECK(test::rel(test::stack_columns(r_diagonal(op)), rr) <= 1e-12);
    CHECK(((h * h.transpose()) - Mat(rr.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("adjoint identity <Hx, y> = <x, Hᵀy>")
{
  for (std::uint64_t s = 0; s < 20; ++s) {
    CubeDims const d{6, 5, 4};
    Operator       op(test::gaussian_cube(d, s));
    Cube const     x = test::gaussian_cube(d, s + 1000);
    Frame const    y = test::random_frame(6, 5, s + 2000);
    double const   lhs = (apply_H(op, x).array() * y.array()).sum();
    double const   rhs = x.vec().dot(apply_Ht(op, y).vec());
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("R diagonal")
{
  SUBCASE("ones masks give B everywhere")
  {
    Operator op(Cube::Constant({3, 4, 5}, 1.0));
    CHECK(r_diagonal(op) == Frame::Constant(3, 4, 5.0));
    CHECK(op.floored_count() == 0);
  }
  SUBCASE("a dark pixel is floored relative to the peak")
  {
    Cube m = Cube::Constant({2, 2, 2}, 2.0);
    m(1, 0, 0) = 0.0;
    m(1, 0, 1) = 0.0;
    Operator op(m);
    CHECK(op.floored_count() == 1);
    CHECK(op.is_floored(1));
    CHECK(r_diagonal(op)(1, 0) == doctest::Approx(1e-12 * 8.0));
    CHECK(op.r_unfloored()[1] == 0.0);
  }
  SUBCASE("explicit floor must be positive")
  {
    CHECK_THROWS_AS(Operator(Cube::Constant({2, 2, 1}, 1.0), 0.0), Error);
  }
}

TEST_CASE("projection onto the measurement manifold")
{
  CubeDims const d{4, 4, 3};
  Cube const     masks = test::random_cube(d, 1, 0.1, 1.0);
  Operator       op(masks);
  Mat const      h = test::dense_sensing(masks);
  Cube const     v = test::gaussian_cube(d, 2);
  Frame const    y = test::random_frame(4, 4, 3);

  Cube const x = project_to_manifold(op, v, y);

  SUBCASE("the result satisfies Hx = y")
  {
    CHECK((apply_H(op, x) - y).norm() <= 1e-12 * y.norm());
  }
  SUBCASE("matches the dense formula v + Hᵀ(HHᵀ)⁻¹(y − Hv)")
  {
    Mat const hht = h * h.transpose();
    Vec const vv = test::stack_cube(v);
    Vec const want = vv + h.transpose() * hht.ldlt().solve(test::stack_columns(y) - h * vv);
    CHECK(test::rel(test::stack_cube(x), want) <= 1e-12);
  }
  SUBCASE("is the closest point on the manifold")
  {
    Vec const   n = test::stack_cube(x) - test::stack_cube(v);
    // x − v lies in the row space, so it is orthogonal to the null space of H.
    Eigen::FullPivLU<Mat> lu(h);
    Mat const   null = lu.kernel();
    CHECK((null.transpose() * n).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, n.norm()));
  }
  SUBCASE("is idempotent")
  {
    Cube const xx = project_to_manifold(op, x, y);
    CHECK(test::rel(xx.vec(), x.vec()) <= 1e-12);
  }
  SUBCASE("a point already on the manifold is fixed")
  {
    Frame const hv = apply_H(op, v);
    CHECK(test::rel(project_to_manifold(op, v, hv).vec(), v.vec()) <= 1e-14);
  }
  SUBCASE("scale B moves B times further along the same direction")
  {
    Cube const xb = project_to_manifold(op, v, y, 3.0);
    CHECK(test::rel(xb.vec() - v.vec(), 3.0 * (x.vec() - v.vec())) <= 1e-14);
  }
}

TEST_CASE("ADMM x-update")
{
  CubeDims const d{3, 4, 3};
  Cube const     masks = test::gaussian_cube(d, 5);
  Operator       op(masks);
  Mat const      h = test::dense_sensing(masks);
  Cube const     v = test::gaussian_cube(d, 6);
  Cube const     u = test::gaussian_cube(d, 7);
  Frame const    y = test::random_frame(3, 4, 8);

  SUBCASE("matches a dense solve")
  {
    for (double gamma : {1e-3, 0.5, 1.0, 10.0}) {
      CAPTURE(gamma);
      Mat const a = h.transpose() * h + gamma * Mat::Identity(h.cols(), h.cols());
      Vec const b = h.transpose() * test::stack_columns(y) + gamma * (test::stack_cube(v) + test::stack_cube(u));
      Vec const want = a.ldlt().solve(b);
      CHECK(test::rel(test::stack_cube(admm_x_update(op, y, v, u, gamma)), want) <= 1e-9);
    }
  }
  SUBCASE("large gamma returns v + u")
  {
    Cube const x = admm_x_update(op, y, v, u, 1e8);
    CHECK(test::rel(x.vec(), v.vec() + u.vec()) <= 1e-6);
  }
  SUBCASE("non-positive gamma is rejected")
  {
    try {
      admm_x_update(op, y, v, u, 0.0);
      FAIL("expected an error");
    } catch (Error const &e) {
      CHECK(e.kind() == ErrorKind::NonPositiveGamma);
    }
    CHECK_THROWS_AS(admm_x_update(op, y, v, u, -1.0), Error);
  }
}

TEST_CASE("dense assembly")
{
  Cube const masks = test::random_cube({2, 3, 2}, 9);
  Operator   op(masks);
  Mat const  h = build_dense(op);
  REQUIRE(h.rows() == 6);
  REQUIRE(h.cols() == 12);
  CHECK(h(4, 6 + 4) == masks(0, 2, 1));
  CHECK(h(4, 5) == 0.0);

  try {
    build_dense(Operator(Cube::Constant({64, 64, 8}, 1.0)));
    FAIL("expected TooLarge");
  } catch (Error const &e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("norm of HᵀR⁻¹H")
{
  SUBCASE("single frame")
  {
    Operator op(test::random_cube({5, 5, 1}, 10, 0.5, 2.0));
    CHECK(std::abs(operator_norm(op) - 1.0) <= 1e-8);
  }
  SUBCASE("disjoint binary supports")
  {
    Cube m(4, 4, 2);
    for (Index j = 0; j < 4; ++j) {
      for (Index i = 0; i < 4; ++i) { m(i, j, (i + j) % 2) = 1.0; }
    }
    CHECK(std::abs(operator_norm(Operator(m)) - 1.0) <= 1e-8);
  }
  SUBCASE("dense spectral norm agrees")
  {
    Operator  op(test::gaussian_cube({3, 3, 3}, 11));
    Mat const h = build_dense(op);
    Mat const a = h.transpose() * op.r().cwiseInverse().asDiagonal() * h;
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    CHECK(operator_norm(op) == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-8));
  }
  SUBCASE("100 Gaussian operators stay within 1e-8 of one")
  {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      worst = std::max(worst, std::abs(operator_norm(sample_gaussian_operator(8, 8, 4, s)) - 1.0));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("operator shape checks")
{
  Operator op(Cube::Constant({2, 2, 2}, 1.0));
  CHECK_THROWS_AS(apply_H(op, Cube(2, 2, 3)), Error);
  CHECK_THROWS_AS(apply_Ht(op, Frame(Frame::Zero(2, 3))), Error);
  CHECK_THROWS_AS(project_to_manifold(op, Cube(2, 2, 2), Frame(Frame::Zero(3, 2))), Error);
}
