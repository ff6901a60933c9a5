#include <cmath>
#include <numbers>

#include "doctest.h"
#include "potopt/error.hpp"
#include "potopt/grid.hpp"

using namespace potopt;

TEST_CASE("interval weights are trapezoidal") {
  const Grid g = make_interval(0.0, 2.0, 5);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.weight(0) == doctest::Approx(0.25));
  CHECK(g.weight(2) == doctest::Approx(0.5));
  CHECK(g.volume() == doctest::Approx(2.0));
  CHECK(g.is_dirichlet(0));
  CHECK(g.is_dirichlet(4));
  CHECK_FALSE(g.is_dirichlet(2));
  CHECK(g.first_free() == 1);
  CHECK(g.last_free() == 4);
}

TEST_CASE("radial weights telescope to the ball volume") {
  for (int d : {1, 2, 3, 4}) {
    const Grid g = make_radial(3.0, d, 301);
    const double exact = sphere_surface(d) * std::pow(3.0, d) / d;
    CHECK(g.volume() == doctest::Approx(exact).epsilon(1e-12));
    double sum = 0.0;
    for (double w : g.weights()) sum += w;
    CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
    CHECK(g.first_free() == 0);
    CHECK(g.is_dirichlet(g.size() - 1));
  }
  CHECK(sphere_surface(1) == 1.0);
  CHECK(sphere_surface(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_surface(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("radial quadrature of r^2 in 3d") {
  const Grid g = make_radial(1.0, 3, 2001);
  const Field r2(g, [](double r) { return r * r; });
  CHECK(integrate(r2) == doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-5));
}

TEST_CASE("invalid domains throw") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  CHECK(code([] { make_interval(1.0, 0.0, 10); }) == ErrorCode::InvalidDomain);
  CHECK(code([] { make_interval(0.0, 1.0, 2); }) == ErrorCode::InvalidDomain);
  CHECK(code([] { make_radial(-1.0, 3, 10); }) == ErrorCode::InvalidDomain);
  CHECK(code([] { make_radial(1.0, 0, 10); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("field arithmetic and norms") {
  const Grid g = make_interval(0.0, 1.0, 11);
  Field a(g, [](double x) { return x; });
  Field b(g, [](double) { return 2.0; });
  const Field c = a + b;
  CHECK(c[10] == doctest::Approx(3.0));
  CHECK(norm_inf(a - b) == doctest::Approx(2.0));
  CHECK(inner(a, b) == doctest::Approx(1.0));
  CHECK(norm_l2(b) == doctest::Approx(2.0));
  b.apply_dirichlet();
  CHECK(b[0] == 0.0);
  CHECK(b[10] == 0.0);
  CHECK(a.all_finite());
  a[3] = INFINITY;
  CHECK_FALSE(a.all_finite());
}

TEST_CASE("fields on different grids are rejected") {
  const Field a(make_interval(0.0, 1.0, 11));
  const Field b(make_interval(0.0, 1.0, 12));
  CHECK_THROWS_AS(inner(a, b), Error);
  CHECK_THROWS_AS(require_same_grid(a, b), Error);
  const Field c(make_interval(0.0, 1.0, 11));
  CHECK_NOTHROW(require_same_grid(a, c));
}
