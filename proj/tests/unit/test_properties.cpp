#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "doctest.h"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

using namespace potopt;

namespace {

Field random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Field u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = U(rng);
  u.apply_dirichlet();
  return u;
}

Field positive_profile(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.5, 1.5);
  Field u(g);
  const double a = g.lower(), b = g.upper();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = (g.node(i) - a) / (b - a);
    u[i] = (g.kind() == GridKind::Radial ? (1.0 - t * t) : t * (1.0 - t)) * U(rng);
  }
  u.apply_dirichlet();
  return u;
}

bool bit_identical(const Field& a, const Field& b) {
  return a.size() == b.size() && std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("gradient agrees with central differences") {
  std::mt19937_64 rng(20240611);
  const Grid line = make_interval(0.0, 1.0, 31);
  const Grid ball = make_radial(2.0, 3, 31);
  for (const Grid& g : {line, ball}) {
    const Field f = random_field(g, rng, -1.0, 2.0);
    const Field V = random_field(g, rng, 0.0, 4.0);
    const std::vector<std::pair<std::string, FunctionalKind>> kinds{
        {"Jp", FunctionalKind::jp(2.5, f)},
        {"J1", FunctionalKind::j1(f)},
        {"JInvP", FunctionalKind::jinvp(1.5, f, 1e-2)},
        {"Lambda1InvP", FunctionalKind::lambda1_invp(1.0, 1e-2)},
        {"Lambda1Exp", FunctionalKind::lambda1_exp(2.0, 1e-2)},
        {"EnergyExp", FunctionalKind::energy_exp(0.5, f, 1e-2)},
        {"Quadratic", FunctionalKind::quadratic(V, f)},
    };
    for (const auto& [name, k] : kinds) {
      CAPTURE(name);
      const Field u = positive_profile(g, rng) + 0.1 * random_field(g, rng, -1.0, 1.0);
      const Field G = gradient(k, u);
      const double F = eval(k, u);
      const double t = 1e-5;
      for (int dir = 0; dir < 20; ++dir) {
        const Field v = random_field(g, rng, -1.0, 1.0);
        const double fd = (eval(k, u + t * v) - eval(k, u - t * v)) / (2.0 * t);
        CHECK(std::abs(inner(G, v) - fd) <= 1e-5 * (1.0 + std::abs(F)));
      }
    }
  }
}

TEST_CASE("convexity of the energy kinds") {
  std::mt19937_64 rng(5);
  const Grid g = make_interval(0.0, 1.0, 41);
  const Field f = random_field(g, rng, -1.0, 1.0);
  for (const FunctionalKind& k : {FunctionalKind::jp(2.0, f), FunctionalKind::j1(f), FunctionalKind::jinvp(1.0, f)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Field u = random_field(g, rng, -1.0, 1.0), v = random_field(g, rng, -1.0, 1.0);
      const Field mid = 0.5 * (u + v);
      CHECK(eval(k, mid) <= 0.5 * eval(k, u) + 0.5 * eval(k, v) + 1e-12);
    }
  }
}

TEST_CASE("Jp tends to J1 pointwise") {
  std::mt19937_64 rng(9);
  const Grid g = make_interval(0.0, 1.0, 41);
  const Field f = random_field(g, rng, -1.0, 1.0);
  const Field u = random_field(g, rng, -1.0, 1.0);
  const double j1 = eval(FunctionalKind::j1(f), u);
  double prev = INFINITY;
  for (double p : {2.0, 1.1, 1.01, 1.001}) {
    const double gap = std::abs(eval(FunctionalKind::jp(p, f), u) - j1);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("sign symmetry without a source") {
  std::mt19937_64 rng(13);
  const Grid g = make_interval(0.0, 1.0, 41);
  const Field zero(g);
  const Field u = random_field(g, rng, -1.0, 1.0);
  for (const FunctionalKind& k : {FunctionalKind::jp(3.0, zero), FunctionalKind::jinvp(2.0, zero, 1e-3),
                                   FunctionalKind::lambda1_invp(1.0)})
    CHECK(eval(k, u) == doctest::Approx(eval(k, -1.0 * u)).epsilon(1e-14));
}

TEST_CASE("energy and lambda_1 are monotone in the potential") {
  std::mt19937_64 rng(17);
  const Grid g = make_interval(0.0, 1.0, 81);
  for (int trial = 0; trial < 50; ++trial) {
    const Field f = random_field(g, rng, -1.0, 1.0);
    const Field V1 = random_field(g, rng, 0.0, 10.0);
    const Field V2 = V1 + random_field(g, rng, 0.0, 10.0);
    CHECK(energy_of_potential(V1, f) <= energy_of_potential(V2, f) + 1e-15);
    CHECK(eigenpairs(V1, 1).eigenvalues[0] <= eigenpairs(V2, 1).eigenvalues[0] + 1e-12);
  }
}

TEST_CASE("maximum principle") {
  std::mt19937_64 rng(23);
  const Grid line = make_interval(0.0, 1.0, 81);
  const Grid ball = make_radial(1.0, 2, 81);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid& g = trial % 2 ? line : ball;
    const Field f = random_field(g, rng, 0.0, 1.0);
    const Field V = random_field(g, rng, 0.0, 50.0);
    const Field u = solve_linear(V, f);
    const Field u0 = solve_linear(Field(g), f);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(u[i] >= 0.0);
      CHECK(u[i] <= u0[i] + 1e-14);
    }
  }
}

TEST_CASE("reruns are bit-identical") {
  const Grid g = make_radial(4.0, 1, 401);
  const Field f(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
  const SolveResult a = solve_energy_inverse_lp(f, 2.0), b = solve_energy_inverse_lp(f, 2.0);
  CHECK(bit_identical(a.u, b.u));
  CHECK(bit_identical(a.potential.V, b.potential.V));
  CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
  const SolveResult c = solve_lambda1_inverse_lp(g, 1.0), d = solve_lambda1_inverse_lp(g, 1.0);
  CHECK(bit_identical(c.u, d.u));
  const Spectrum s1 = eigenpairs(Field(g), 2), s2 = eigenpairs(Field(g), 2);
  CHECK(bit_identical(s1.eigenfunctions[1], s2.eigenfunctions[1]));
  const SupNormResult m1 = minimize_sup_norm(Field(make_interval(0.0, 1.0, 101), [](double) { return 1.0; }));
  const SupNormResult m2 = minimize_sup_norm(Field(make_interval(0.0, 1.0, 101), [](double) { return 1.0; }));
  CHECK(bit_identical(m1.u, m2.u));
}
