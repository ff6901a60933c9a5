#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "potopt/analysis.hpp"
#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

using namespace potopt;

TEST_CASE("support radius of a compact profile") {
  const Grid g = make_radial(4.0, 1, 401);
  const Field u(g, [](double r) { return r < 2.0 ? std::pow(2.0 - r, 3) : 0.0; });
  const SupportReport s = support_radius(u);
  CHECK(s.support_radius == doctest::Approx(1.99).epsilon(1e-9));
  REQUIRE(s.decay_slope.has_value());
  CHECK(s.edge_fit);
  CHECK(*s.decay_slope == doctest::Approx(3.0).epsilon(1e-2));
  CHECK_THROWS_AS(support_radius(Field(g)), Error);
}

TEST_CASE("power-law tail slope") {
  const Grid g = make_radial(100.0, 3, 4001);
  const Field u(g, [](double r) { return std::pow(1.0 + r, -1.5); });
  const SupportReport s = support_radius(u);
  REQUIRE(s.decay_slope.has_value());
  CHECK_FALSE(s.edge_fit);
  CHECK(*s.decay_slope == doctest::Approx(-1.5).epsilon(0.1));
}

TEST_CASE("interval support is a half-width") {
  const Grid g = make_interval(-3.0, 3.0, 601);
  const Field u(g, [](double x) { return std::abs(x) < 1.0 ? 1.0 - x * x : 0.0; });
  CHECK(support_radius(u).support_radius == doctest::Approx(0.99).epsilon(1e-9));
}

TEST_CASE("compare support") {
  SupportReport a, b;
  a.support_radius = 2.0;
  a.spacing = 0.01;
  b.support_radius = 2.015;
  b.spacing = 0.01;
  CHECK(compare_support(a, b).stable);
  b.support_radius = 2.05;
  CHECK_FALSE(compare_support(a, b).stable);
  CHECK(compare_support(a, b).compared);
}

TEST_CASE("decay check rejects a slowly decaying tail") {
  const Grid g = make_radial(20.0, 1, 2001);
  Field u(g, [](double r) { return std::exp(-0.01 * r); });
  u.apply_dirichlet();
  CHECK_FALSE(ode_decay_check(u, 2.0, 1).pass);
}

TEST_CASE("counterexample baseline matches the hard-wall oracle") {
  for (std::size_t n : {2u, 4u, 8u}) {
    const CounterexampleReport c = counterexample_energy(n, 4 * n);
    CHECK(c.limit_energy == doctest::Approx(oracle::hard_wall_energy(n)).epsilon(1e-14));
    CHECK(std::abs(c.hard_wall_energy - c.limit_energy) < 1e-6);
    CHECK(c.budget == doctest::Approx(1.0).epsilon(1e-10));
  }
  try {
    counterexample_energy(4, 8, 41);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnderResolvedGrid);
  }
}

TEST_CASE("gamma distances shrink for oscillating potentials") {
  const Grid g = make_interval(0.0, 1.0, 1001);
  std::vector<Field> seq;
  for (int n : {4, 8, 16}) seq.emplace_back(g, [n](double x) { return 1.0 + std::sin(2.0 * 3.141592653589793 * n * x); });
  const auto d = gamma_convergence_demo(seq, Field(g, [](double) { return 1.0; }));
  CHECK(d[1] < d[0]);
  CHECK(d[2] < d[1]);
}

TEST_CASE("GNS stationarity of a Gaussian is not exact") {
  const Grid g = make_radial(8.0, 1, 801);
  Field u(g, [](double r) { return std::exp(-r * r); });
  u.apply_dirichlet();
  const GnsReport r = gns_stationarity(u, 1.0, 1);
  CHECK(r.A > 0.0);
  CHECK(r.B > 0.0);
  CHECK(r.best_constant > 0.0);
  CHECK(r.ratio > 1e-3);
}

TEST_CASE("budget scaling and two balls") {
  const SolveResult base = solve_lambda1_inverse_lp(make_radial(6.0, 1, 601), 1.0);
  const auto pts = budget_scaling_lambda1(base, 1.0, {0.5, 1.0, 2.0});
  CHECK(pts[1].lambda1 == doctest::Approx(base.objective).epsilon(1e-9));
  CHECK(pts[0].lambda1 > pts[1].lambda1);
  CHECK(pts[1].lambda1 > pts[2].lambda1);
  for (const BudgetPoint& b : pts) CHECK(b.lambda1_direct == doctest::Approx(b.lambda1).epsilon(1e-8));

  const TwoBallReport t = lambda2_two_ball(base, 1.0);
  CHECK(t.lambda2 == doctest::Approx(t.lambda1).epsilon(1e-6));
  CHECK(t.lambda1 == doctest::Approx(t.lambda1_half).epsilon(1e-6));
  CHECK(t.lambda2_single > t.lambda2);
  try {
    lambda2_two_ball(base, 1.0, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingSupports);
  }
}
