#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "potopt/analysis.hpp"
#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

using namespace potopt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Field chi_ball(const Grid& g) {
  return Field(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
}

Outcome examdelta() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = make_interval(-1.0, 1.0, 2001);
  Field f(g);
  const std::size_t mid = 1000;
  f[mid] = 1.0 / g.weight(mid);
  const SolveResult r = solve_energy_l1(f);
  const double t = seconds_since(t0);
  const bool contact = r.potential.omega_plus.size() == 1 && r.potential.omega_plus[0] == mid &&
                       r.potential.omega_minus.empty();
  const double M = r.potential.M;
  const bool ok = std::abs(M - oracle::kDeltaM) <= 1e-3 && contact &&
                  std::abs(r.objective - oracle::kDeltaJ1) <= 1e-3 && t < 10.0;
  return {ok, fmt("M=%.8f J1=%.8f contact={%s} time=%.2fs", M, r.objective, contact ? "0" : "?", t)};
}

Outcome duality() {
  const Grid g = make_interval(0.0, 1.0, 2001);
  const Field f(g, [](double) { return 1.0; });
  bool ok = true;
  std::string d;
  for (double p : {2.0, 3.0}) {
    const SolveResult r = solve_energy_lp(f, p);
    const double rel = std::abs(r.diagnostics.duality_gap) / std::abs(r.objective);
    const double budget = r.diagnostics.constraint_residual + 1.0;
    ok = ok && rel <= 1e-6 && std::abs(budget - 1.0) <= 1e-4;
    d += fmt("p=%g gap=%.2e budget=%.12f ", p, rel, budget);
  }
  return {ok, d};
}

Outcome holder() {
  const Grid g = make_interval(0.0, 1.0, 2001);
  const Field f(g, [](double) { return 1.0; });
  bool ok = true;
  std::string d;
  for (double p : {2.0, 3.0}) {
    const SolveResult r = solve_energy_lp(f, p);
    ok = ok && r.diagnostics.holder_gap <= 1e-6;
    d += fmt("p=%g gap=%.2e ", p, r.diagnostics.holder_gap);
  }
  return {ok, d};
}

Outcome l1_identity() {
  const Grid g = make_interval(0.0, 1.0, 2001);
  const Field f(g, [](double) { return 1.0; });
  const SolveResult r = solve_energy_l1(f);
  double mass = 0.0;
  for (std::size_t i : r.potential.omega_plus) mass += g.weight(i) * f[i];
  const double diff = std::abs(mass - r.potential.M);
  const bool ok = diff <= 1e-3 && r.potential.omega_minus.empty();
  return {ok, fmt("M=%.8f mass=%.8f diff=%.2e |omega-|=%zu", r.potential.M, mass, diff, r.potential.omega_minus.size())};
}

Outcome counterexample() {
  bool ok = true;
  std::string d;
  for (std::size_t n : {2u, 4u, 8u}) {
    const CounterexampleReport c = counterexample_energy(n, 8);
    const double err = std::abs(c.hard_wall_energy - oracle::hard_wall_energy(n));
    ok = ok && err <= 1e-6;
    d += fmt("wall n=%zu err=%.1e ", n, err);
  }
  double prev = -INFINITY;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const CounterexampleReport c = counterexample_energy(n, 4 * n * n * n);
    ok = ok && c.energy > prev;
    prev = c.energy;
    d += fmt("E(n=%zu)=%.3e ", n, c.energy);
  }
  // first run gave |E(16)| = 9.32e-4; pinned at 2e-3 (bound 2e-2)
  ok = ok && std::abs(prev) <= 2e-3;
  return {ok, d};
}

Outcome decay_law() {
  auto run = [](double R) {
    const Grid g = make_radial(R, 3, static_cast<std::size_t>(R * 50) + 1);
    return solve_energy_lp(chi_ball(g), 2.0);
  };
  const SolveResult a = run(64.0), b = run(128.0);
  const SupportReport s = compare_support(support_radius(a.u), support_radius(b.u));
  const double slope = s.decay_slope.value_or(NAN);
  const double target = -2.0 / 3.0;
  const bool ok = !s.edge_fit && std::abs(slope - target) <= 0.05 * std::abs(target) && !s.stable;
  return {ok, fmt("slope=%.4f target=%.4f stable=%s", slope, target, s.stable ? "true" : "false")};
}

Outcome compact_support() {
  bool ok = true;
  std::string d;
  {
    auto run = [](double R) {
      const Grid g = make_radial(R, 1, static_cast<std::size_t>(R * 500) + 1);
      return solve_energy_inverse_lp(chi_ball(g), 2.0);
    };
    const SolveResult a = run(8.0), b = run(16.0);
    const SupportReport s = compare_support(support_radius(a.u), support_radius(b.u));
    const DecayCheck dc = ode_decay_check(a.u, 2.0, 1);
    ok = ok && s.stable && dc.pass;
    d += fmt("energy: r=%.4f/%.4f stable=%s ode=%.3f ", s.support_radius, support_radius(b.u).support_radius,
             s.stable ? "true" : "false", dc.fraction);
  }
  {
    auto run = [](double R) { return solve_lambda1_inverse_lp(make_radial(R, 1, static_cast<std::size_t>(R * 250) + 1), 1.0); };
    const SolveResult a = run(6.0), b = run(12.0);
    const SupportReport s = compare_support(support_radius(a.u), support_radius(b.u));
    DecayCheckOptions o;
    o.tail_start = 0.0;
    o.lambda = a.diagnostics.potential_cost;
    const DecayCheck dc = ode_decay_check(a.u, 1.0, 1, o);
    ok = ok && s.stable && dc.pass;
    d += fmt("lambda1: r=%.4f/%.4f stable=%s ode=%.3f", s.support_radius, support_radius(b.u).support_radius,
             s.stable ? "true" : "false", dc.fraction);
  }
  return {ok, d};
}

Outcome eigensolver() {
  const Grid g = make_interval(0.0, 1.0, 2001);
  const Spectrum s = eigenpairs(Field(g), 2);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double e1 = std::abs(s.eigenvalues[0] / pi2 - 1.0), e2 = std::abs(s.eigenvalues[1] / (4.0 * pi2) - 1.0);
  bool ok = e1 <= 1e-3 && e2 <= 2e-3;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 30.0);
  double worst = 0.0;
  for (std::size_t n = 4; n <= 12; ++n) {
    for (const Grid& small : {make_interval(0.0, 1.0, n), make_radial(1.0, 3, n)}) {
      Field V(small);
      for (std::size_t i = 0; i < n; ++i) V[i] = U(rng);
      const std::vector<double> ref = oracle::dense_eigenvalues(V);
      const std::size_t k = std::min<std::size_t>(3, ref.size());
      const Spectrum t = eigenpairs(V, k);
      for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, std::abs(t.eigenvalues[j] - ref[j]) / std::abs(ref[j]));
    }
  }
  ok = ok && worst <= 1e-8;
  return {ok, fmt("lambda1 err=%.2e lambda2 err=%.2e dense oracle=%.2e", e1, e2, worst)};
}

Outcome two_ball() {
  const SolveResult base = solve_lambda1_inverse_lp(make_radial(6.0, 1, 1501), 1.0);
  const TwoBallReport t = lambda2_two_ball(base, 1.0);
  const double dbl = std::abs(t.lambda2 - t.lambda1) / t.lambda1;
  const double half = std::abs(t.lambda2 - t.lambda1_half) / t.lambda1_half;
  return {dbl <= 1e-6 && half <= 1e-6,
          fmt("lambda1=%.10f lambda2=%.10f half-budget=%.10f double=%.1e match=%.1e", t.lambda1, t.lambda2,
              t.lambda1_half, dbl, half)};
}

Outcome gamma_demo() {
  const Grid g = make_interval(0.0, 1.0, 2001);
  std::vector<Field> seq;
  for (int n : {8, 16, 32, 64})
    seq.emplace_back(g, [n](double x) { return 1.0 + std::sin(2.0 * std::numbers::pi * n * x); });
  const auto d = gamma_convergence_demo(seq, Field(g, [](double) { return 1.0; }));
  bool ok = d[3] <= d[0] / 4.0;
  for (std::size_t i = 1; i < d.size(); ++i) ok = ok && d[i] < d[i - 1];
  return {ok, fmt("d=%.3e %.3e %.3e %.3e", d[0], d[1], d[2], d[3])};
}

Outcome gns() {
  const SolveResult r = solve_lambda1_inverse_lp(make_radial(12.0, 1, 3001), 1.0);
  const GnsReport g = gns_stationarity(r.u, 1.0, 1);
  return {g.ratio <= 1e-4, fmt("|g'(1)|/g(1)=%.2e", g.ratio)};
}

Field random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Field u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = U(rng);
  u.apply_dirichlet();
  return u;
}

Outcome properties() {
  std::mt19937_64 rng(42);
  const Grid g = make_interval(0.0, 1.0, 31);
  const Field f = random_field(g, rng, -1.0, 1.0);
  const Field V = random_field(g, rng, 0.0, 4.0);
  const std::vector<FunctionalKind> kinds{FunctionalKind::jp(2.0, f),         FunctionalKind::j1(f),
                                          FunctionalKind::jinvp(1.0, f, 1e-2), FunctionalKind::lambda1_invp(2.0, 1e-2),
                                          FunctionalKind::lambda1_exp(1.0, 1e-2), FunctionalKind::energy_exp(1.0, f, 1e-2),
                                          FunctionalKind::quadratic(V, f)};
  double worst = 0.0;
  for (const FunctionalKind& k : kinds) {
    Field u(g, [](double x) { return x * (1.0 - x) + 0.3; });
    u.apply_dirichlet();
    u += 0.1 * random_field(g, rng, -1.0, 1.0);
    const Field G = gradient(k, u);
    const double F = eval(k, u), t = 1e-5;
    for (int dir = 0; dir < 20; ++dir) {
      const Field v = random_field(g, rng, -1.0, 1.0);
      const double fd = (eval(k, u + t * v) - eval(k, u - t * v)) / (2.0 * t);
      worst = std::max(worst, std::abs(inner(G, v) - fd) / (1.0 + std::abs(F)));
    }
  }
  int mono = 0, maxp = 0;
  const Grid h = make_interval(0.0, 1.0, 101);
  for (int trial = 0; trial < 50; ++trial) {
    const Field src = random_field(h, rng, -1.0, 1.0);
    const Field V1 = random_field(h, rng, 0.0, 10.0), V2 = V1 + random_field(h, rng, 0.0, 10.0);
    if (energy_of_potential(V1, src) <= energy_of_potential(V2, src) &&
        eigenpairs(V1, 1).eigenvalues[0] <= eigenpairs(V2, 1).eigenvalues[0])
      ++mono;
    const Field fp = random_field(h, rng, 0.0, 1.0), Vp = random_field(h, rng, 0.0, 50.0);
    const Field u = solve_linear(Vp, fp), u0 = solve_linear(Field(h), fp);
    bool good = true;
    for (std::size_t i = 0; i < h.size(); ++i) good = good && u[i] >= 0.0 && u[i] <= u0[i];
    if (good) ++maxp;
  }
  const Grid r = make_radial(4.0, 1, 401);
  const SolveResult a = solve_energy_inverse_lp(chi_ball(r), 2.0), b = solve_energy_inverse_lp(chi_ball(r), 2.0);
  const bool det = std::memcmp(a.u.values().data(), b.u.values().data(), a.u.size() * sizeof(double)) == 0 &&
                   std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0;
  const bool ok = worst <= 1e-5 && mono == 50 && maxp == 50 && det;
  return {ok, fmt("gradient=%.1e monotone=%d/50 maximum=%d/50 deterministic=%s", worst, mono, maxp,
                  det ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"examdelta", examdelta},  {"duality", duality},          {"holder saturation", holder},
      {"p=1 identity", l1_identity}, {"counterexample", counterexample}, {"decay law", decay_law},
      {"compact support", compact_support}, {"eigensolver", eigensolver}, {"lambda2 two balls", two_ball},
      {"gamma convergence", gamma_demo}, {"GNS stationarity", gns},    {"property suites", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
