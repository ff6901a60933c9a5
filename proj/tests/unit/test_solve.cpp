#include <cmath>

#include "doctest.h"
#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

using namespace potopt;

TEST_CASE("Lp energy: duality and budget") {
  const Grid g = make_interval(0.0, 1.0, 401);
  const Field f(g, [](double) { return 1.0; });
  for (double p : {1.5, 2.0, 3.0}) {
    const SolveResult r = solve_energy_lp(f, p);
    CHECK(r.converged);
    CHECK(std::abs(r.diagnostics.duality_gap) <= 1e-8 * std::abs(r.objective));
    CHECK(std::abs(r.diagnostics.constraint_residual) < 1e-10);
    CHECK(r.diagnostics.holder_gap < 1e-10);
    CHECK(r.diagnostics.el_residual < 1e-8);
  }
}

TEST_CASE("Lp energy increases toward the L1 limit") {
  const Grid g = make_interval(0.0, 1.0, 401);
  const Field f(g, [](double) { return 1.0; });
  const double e2 = solve_energy_lp(f, 2.0).objective;
  const double e3 = solve_energy_lp(f, 3.0).objective;
  const double e1 = solve_energy_l1(f).objective;
  CHECK(e1 > e2);
  CHECK(e1 < 0.0);
  CHECK(e3 < e2);
}

TEST_CASE("L1 energy: source mass on the contact set equals M") {
  const Grid g = make_interval(0.0, 1.0, 1001);
  const Field f(g, [](double) { return 1.0; });
  const SolveResult r = solve_energy_l1(f);
  CHECK(r.potential.omega_minus.empty());
  double mass = 0.0;
  for (std::size_t i : r.potential.omega_plus) mass += g.weight(i);
  CHECK(std::abs(mass - r.potential.M) < 2e-3);
  CHECK(r.potential.M == doctest::Approx(5.0 - 2.0 * std::sqrt(6.0)).epsilon(1e-4));
  CHECK(std::abs(r.diagnostics.duality_gap) < 1e-10);
}

TEST_CASE("inverse Lp energy has compact support inside the domain") {
  const Grid g = make_radial(6.0, 1, 1201);
  const Field f(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
  const SolveResult r = solve_energy_inverse_lp(f, 2.0);
  CHECK(r.converged);
  CHECK(r.diagnostics.support_radius > 1.0);
  CHECK(r.diagnostics.support_radius < 5.0);
  CHECK(std::abs(r.diagnostics.duality_gap) < 1e-8 * std::abs(r.objective));
  CHECK(std::abs(r.diagnostics.constraint_residual) < 1e-8);
  CHECK_FALSE(r.epsilon_history.empty());
  CHECK(r.epsilon_history.size() == r.support_history.size());
}

TEST_CASE("exponential energy on a large interval") {
  const Grid g = make_interval(-8.0, 8.0, 801);
  const Field f(g, [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
  const SolveResult r = solve_energy_exponential(f, 1.0);
  CHECK(std::abs(r.diagnostics.constraint_residual) < 1e-8);
  CHECK(r.objective < 0.0);
  CHECK(r.diagnostics.el_residual < 1e-5);
}

TEST_CASE("lambda_1 with inverse Lp constraint") {
  const Grid g = make_radial(6.0, 1, 901);
  const SolveResult r = solve_lambda1_inverse_lp(g, 1.0);
  CHECK(r.converged);
  CHECK(std::abs(r.diagnostics.duality_gap) < 1e-8 * r.objective);
  CHECK(r.diagnostics.support_radius < 4.0);
  CHECK(std::abs(inner(r.u, r.u) - 1.0) < 1e-12);
}

TEST_CASE("dispatch") {
  const Grid g = make_interval(0.0, 1.0, 101);
  const Field f(g, [](double) { return 1.0; });
  ProblemSpec spec{g, f, ConstraintSpec::lp(2.0)};
  CHECK(solve(spec).objective == doctest::Approx(solve_energy_lp(f, 2.0).objective));
  spec.constraint = ConstraintSpec::lp(0.5);
  CHECK_THROWS_AS(solve(spec), Error);
  spec.constraint = ConstraintSpec::lp(2.0);
  spec.objective = Objective::Lambda1;
  CHECK_THROWS_AS(solve(spec), Error);
  spec.objective = Objective::Lambda2;
  CHECK_THROWS_AS(solve(spec), Error);
  spec.objective = Objective::Energy;
  spec.f.reset();
  CHECK_THROWS_AS(solve(spec), Error);
}

TEST_CASE("zero source is rejected by the singular pipelines") {
  const Grid g = make_interval(0.0, 1.0, 101);
  try {
    solve_energy_inverse_lp(Field(g), 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMinimizer);
  }
}

TEST_CASE("default epsilon schedule") {
  const auto s = default_epsilon_schedule();
  CHECK(s.front() == doctest::Approx(1e-2));
  CHECK(s.back() == doctest::Approx(1e-10));
}
