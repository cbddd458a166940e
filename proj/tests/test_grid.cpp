#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qball/grid.hpp"

using namespace qball;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_grid validates its arguments") {
  const RadialGrid g = make_grid(2, 40.0, 2000);
  CHECK(g.h == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(g.nodes(0) == 0.0);
  CHECK(g.nodes(2000) == doctest::Approx(40.0).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(1, 40.0, 2000), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, -1.0, 2000), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 40.0, 10), std::invalid_argument);
}

TEST_CASE("laplacian is exact on quadratics") {
  for (int dim : {2, 3}) {
    RadialGrid g = make_grid(dim, 5.0, 200);
    const ArrayXd u = g.nodes.square();
    const ArrayXd lap = radial_laplacian(g, u);
    for (Index i = 0; i < g.segments; ++i) {
      CAPTURE(dim);
      CAPTURE(i);
      CHECK(lap(i) == doctest::Approx(2.0 * dim).epsilon(1e-10));
    }
  }
}

TEST_CASE("laplacian of a gaussian converges at second order") {
  auto sup_error = [](Index segments) {
    RadialGrid g = make_grid(2, 8.0, segments);
    const ArrayXd u = (-g.nodes.square()).exp();
    const ArrayXd lap = radial_laplacian(g, u);
    const ArrayXd exact = (4.0 * g.nodes.square() - 4.0) * (-g.nodes.square()).exp();
    return (lap.head(g.segments) - exact.head(g.segments)).abs().maxCoeff();
  };
  const double coarse = sup_error(250);
  const double fine = sup_error(500);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);
  CHECK(fine < 1e-3);
}

TEST_CASE("radial integration oracles") {
  SUBCASE("gaussian charge integral in the plane") {
    RadialGrid g = make_grid(2, 8.0, 2048);
    const ArrayXd f = (-2.0 * g.nodes.square()).exp();  // u^2 for u = e^{-r^2}
    CHECK(integrate_radial(g, f) == doctest::Approx(kPi / 2.0).epsilon(1e-5));
  }
  SUBCASE("zero integrand") {
    RadialGrid g = make_grid(2, 8.0, 256);
    CHECK(integrate_radial(g, ArrayXd::Zero(g.segments + 1)) == 0.0);
  }
  SUBCASE("disc area is exact") {
    RadialGrid g = make_grid(2, 3.0, 300);
    const double area = integrate_radial(g, ArrayXd::Ones(g.segments + 1));
    CHECK(area == doctest::Approx(kPi * 9.0).epsilon(1e-13));
  }
  SUBCASE("3d ball volume") {
    RadialGrid g = make_grid(3, 2.0, 2000);
    const double vol = integrate_radial(g, ArrayXd::Ones(g.segments + 1));
    CHECK(vol == doctest::Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-6));
    CHECK(ball_volume(3, 2.0) == doctest::Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-14));
  }
}

TEST_CASE("gradient_norm_sq oracles") {
  SUBCASE("constant and linear profiles") {
    RadialGrid g = make_grid(2, 1.0, 100);
    ArrayXd ones = ArrayXd::Ones(g.segments + 1);
    CHECK(radial_derivative(g, ones).abs().maxCoeff() == 0.0);
    const ArrayXd gsq = radial_derivative(g, g.nodes).square();
    for (Index i = 1; i < g.segments; ++i)
      CHECK(gsq(i) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("gaussian derivative") {
    RadialProfile u = test::gaussian_profile(8.0, 1024);
    const ArrayXd gsq = gradient_norm_sq(u);
    const ArrayXd exact =
        4.0 * u.grid.nodes.square() * (-2.0 * u.grid.nodes.square()).exp();
    const double err = (gsq.segment(1, u.grid.segments - 1) -
                        exact.segment(1, u.grid.segments - 1))
                           .abs()
                           .maxCoeff();
    CHECK(err < 5e-4);
  }
}

TEST_CASE("discrete self-adjointness of the radial laplacian") {
  RadialGrid g = make_grid(2, 6.0, 1024);
  // Both vanish at the outer boundary; regularity holds at the origin.
  const ArrayXd u = (-g.nodes.square()).exp() - std::exp(-36.0);
  const ArrayXd v = (1.0 - (g.nodes / 6.0).square()).square();
  const double a = integrate_radial(g, (radial_laplacian(g, u) * v).eval());
  const double b = integrate_radial(g, (radial_laplacian(g, v) * u).eval());
  CHECK(a == doctest::Approx(b).epsilon(2e-3));
}

TEST_CASE("profile construction enforces the boundary and finiteness") {
  RadialGrid g = make_grid(2, 5.0, 100);
  ArrayXd vals = ArrayXd::Ones(g.segments + 1);
  const RadialProfile u = make_profile(g, vals);
  CHECK(u.values(g.segments) == 0.0);

  ArrayXd bad = vals;
  bad(3) = std::nan("");
  CHECK_THROWS_AS(make_profile(g, bad), std::invalid_argument);
  CHECK_THROWS_AS(make_profile(g, ArrayXd::Ones(5)), std::invalid_argument);
}

TEST_CASE("linear resampling lands on the same shape") {
  RadialProfile u = test::gaussian_profile(8.0, 500);
  const RadialGrid fine = make_grid(2, 8.0, 1000);
  const RadialProfile v = resample_linear(u, fine);
  for (Index i = 0; i < fine.segments; i += 37) {
    const double exact = std::exp(-fine.nodes(i) * fine.nodes(i));
    CHECK(v.values(i) == doctest::Approx(exact).epsilon(1e-3));
  }
}
