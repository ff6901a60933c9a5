#include "potopt/solve.hpp"

#include <algorithm>
#include <cmath>

#include "potopt/analysis.hpp"
#include "potopt/error.hpp"
#include "potopt/operators.hpp"

namespace potopt {
namespace {

double relative_l2(const Field& a, const Field& b) {
  const double nb = norm_l2(b);
  return nb > 0.0 ? norm_l2(a - b) / nb : norm_l2(a);
}

void energy_diagnostics(SolveResult& r, const Field& f, const ConstraintSpec& psi) {
  Diagnostics& d = r.diagnostics;
  d.constraint_residual = constraint_integral(psi, r.potential) - 1.0;
  if (r.potential.nonnegative) {
    const Field uV = solve_linear(r.potential.V, f);
    d.potential_cost = -0.5 * inner(f, uV);
    d.el_residual = relative_l2(uV, r.u);
  } else {
    d.potential_cost = -0.5 * inner(f, r.u);
    const Field res = apply_operator(r.potential.V, r.u) - f;
    const double nf = norm_l2(f);
    d.el_residual = nf > 0.0 ? norm_l2(res) / nf : norm_l2(res);
  }
  d.duality_gap = d.potential_cost - r.objective;
  try {
    d.support_radius = support_radius(r.u).support_radius;
  } catch (const Error&) {
    d.support_radius = 0.0;
  }
}

double lowest_eigenvalue(const Field& V) {
  double low = 0.0;
  for (double v : V.values()) low = std::min(low, v);
  Field shifted = V;
  for (double& v : shifted.values()) v = std::min(v - low, kWallPotential);
  return eigenpairs(shifted, 1).eigenvalues[0] + low;
}

Field first_eigenfunction(const Grid& grid) { return eigenpairs(Field(grid), 1).eigenfunctions[0]; }

double support_of(const Field& u) {
  try {
    return support_radius(u).support_radius;
  } catch (const Error&) {
    return 0.0;
  }
}

// Runs `stage(eps)` along the epsilon continuation, warm-started through the
// caller's state, until epsilon <= 1e-6 scale and the support moved less than h.
template <class Stage>
void continuation(const SolverOptions& options, double scale, double h, SolveResult& r, Stage stage) {
  const bool custom = !options.schedule.empty();
  const std::vector<double> factors = custom ? options.schedule : default_epsilon_schedule();
  double previous = -1.0;
  for (double factor : factors) {
    const double eps = factor * scale;
    const Field& u = stage(eps);
    const double radius = support_of(u);
    r.epsilon_history.push_back(eps);
    r.support_history.push_back(radius);
    if (!custom && factor <= 1e-6 && previous >= 0.0 && std::abs(radius - previous) < h) break;
    previous = radius;
  }
}

}  // namespace

std::vector<double> default_epsilon_schedule() {
  std::vector<double> s;
  for (int k = 2; k <= 10; ++k) s.push_back(std::pow(10.0, -k));
  return s;
}

SolveResult solve_energy_lp(const Field& f, double p, const SolverOptions& options) {
  const FunctionalKind kind = FunctionalKind::jp(p, f);
  MinimizeResult m = minimize(kind, Field(f.grid()), options);
  SolveResult r{m.u, recover_lp(m.u, p)};
  r.objective = m.value;
  r.converged = m.converged;
  r.iterations = m.iterations;
  energy_diagnostics(r, f, ConstraintSpec::lp(p));
  // Hoelder equality: integral u^2 V = ||V||_p ||u||_q^2
  const double q = 2.0 * p / (p - 1.0);
  double uV = 0.0, Vp = 0.0, uq = 0.0;
  const auto w = f.grid().weights();
  const double M = norm_inf(r.u);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double V = r.potential.V[i];
    uV += w[i] * r.u[i] * r.u[i] * V;
    Vp += w[i] * std::pow(V, p);
    uq += w[i] * std::pow(std::abs(r.u[i]) / M, q);
  }
  const double rhs = std::pow(Vp, 1.0 / p) * M * M * std::pow(uq, 2.0 / q);
  r.diagnostics.holder_gap = rhs > 0.0 ? std::abs(uV - rhs) / rhs : 0.0;
  return r;
}

SolveResult solve_energy_l1(const Field& f, const SolverOptions& options) {
  SupNormResult s = minimize_sup_norm(f, options);
  SolveResult r{s.u, recover_l1(s, f)};
  r.objective = s.value;
  r.converged = s.converged;
  r.iterations = s.iterations;
  if (s.degenerate) {
    r.diagnostics.support_radius = 0.0;
    r.diagnostics.constraint_residual = -1.0;
    return r;
  }
  energy_diagnostics(r, f, ConstraintSpec::lp(1.0));
  return r;
}

SolveResult solve_energy_inverse_lp(const Field& f, double p, const SolverOptions& options) {
  options.validate();
  const Grid& grid = f.grid();
  const double scale = norm_inf(solve_linear(Field(grid), f));
  if (!(scale > 0.0)) throw Error(ErrorCode::ZeroMinimizer, "f = 0 gives the zero minimizer");
  SolveResult r{Field(grid), RecoveredPotential{Field(grid)}};
  Field u(grid);
  MinimizeResult last{Field(grid)};
  continuation(options, scale, grid.spacing(), r, [&](double eps) -> const Field& {
    last = minimize(FunctionalKind::jinvp(p, f, eps), u, options);
    r.iterations += last.iterations;
    u = last.u;
    return u;
  });
  r.u = u;
  r.converged = last.converged;
  r.objective = eval(FunctionalKind::jinvp(p, f, 0.0), u);
  r.potential = recover_inverse_lp(u, p);
  r.multiplier = r.potential.multiplier;
  energy_diagnostics(r, f, ConstraintSpec::inverse_lp(p));
  return r;
}

SolveResult solve_energy_exponential(const Field& f, double alpha, const SolverOptions& options) {
  options.validate();
  const Grid& grid = f.grid();
  const double scale = norm_inf(solve_linear(Field(grid), f));
  if (!(scale > 0.0)) throw Error(ErrorCode::ZeroMinimizer, "f = 0 gives the zero minimizer");
  SolveResult r{Field(grid), RecoveredPotential{Field(grid)}};
  Field u(grid);
  MinimizeResult last{Field(grid)};
  continuation(options, scale, grid.spacing(), r, [&](double eps) -> const Field& {
    last = minimize(FunctionalKind::energy_exp(alpha, f, eps), u, options);
    r.iterations += last.iterations;
    u = last.u;
    return u;
  });
  r.u = u;
  r.converged = last.converged;
  r.objective = eval(FunctionalKind::energy_exp(alpha, f, 0.0), u);
  r.potential = recover_exponential(u, alpha);
  r.multiplier = r.potential.multiplier;
  energy_diagnostics(r, f, ConstraintSpec::exponential(alpha));
  return r;
}

namespace {

template <class MakeKind, class Recover>
SolveResult lambda1_pipeline(const Grid& grid, const SolverOptions& options, const ConstraintSpec& psi,
                             MakeKind make_kind, Recover recover) {
  options.validate();
  Field u = first_eigenfunction(grid);
  const double scale = norm_inf(u);
  SolveResult r{Field(grid), RecoveredPotential{Field(grid)}};
  SphereResult last{Field(grid)};
  continuation(options, scale, grid.spacing(), r, [&](double eps) -> const Field& {
    last = minimize_on_sphere(make_kind(eps), u, options);
    r.iterations += last.iterations;
    u = last.u;
    return u;
  });
  r.u = u;
  r.converged = last.converged;
  r.objective = eval(make_kind(0.0), u);
  r.potential = recover(u);
  r.multiplier = r.potential.multiplier;
  Diagnostics& d = r.diagnostics;
  d.constraint_residual = constraint_integral(psi, r.potential) - 1.0;
  d.potential_cost = lowest_eigenvalue(r.potential.V);
  d.duality_gap = d.potential_cost - r.objective;
  d.el_residual = last.multiplier != 0.0 ? last.residual / std::abs(last.multiplier) : last.residual;
  d.support_radius = support_of(u);
  return r;
}

}  // namespace

SolveResult solve_lambda1_inverse_lp(const Grid& grid, double p, const SolverOptions& options) {
  return lambda1_pipeline(
      grid, options, ConstraintSpec::inverse_lp(p), [p](double eps) { return FunctionalKind::lambda1_invp(p, eps); },
      [p](const Field& u) { return recover_inverse_lp(u, p); });
}

SolveResult solve_lambda1_exponential(const Grid& grid, double alpha, const SolverOptions& options) {
  return lambda1_pipeline(
      grid, options, ConstraintSpec::exponential(alpha),
      [alpha](double eps) { return FunctionalKind::lambda1_exp(alpha, eps); },
      [alpha](const Field& u) { return recover_exponential(u, alpha); });
}

SolveResult solve(const ProblemSpec& spec) {
  using Family = ConstraintSpec::Family;
  const ConstraintSpec& c = spec.constraint;
  if (spec.objective == Objective::Energy) {
    if (!spec.f) throw Error(ErrorCode::InvalidArgument, "energy objective needs a source f");
    const Field& f = *spec.f;
    if (!f.grid().same_as(spec.grid)) throw Error(ErrorCode::MismatchedGrid, "source lives on another grid");
    switch (c.family) {
      case Family::Lp:
        if (c.p == 1.0) return solve_energy_l1(f, spec.options);
        if (c.p > 1.0) return solve_energy_lp(f, c.p, spec.options);
        throw Error(ErrorCode::InvalidArgument, "the Lp energy problem has no solution for p < 1");
      case Family::InverseLp:
        return solve_energy_inverse_lp(f, c.p, spec.options);
      case Family::Exponential:
        return solve_energy_exponential(f, c.alpha, spec.options);
    }
  }
  if (spec.objective == Objective::Lambda1) {
    switch (c.family) {
      case Family::InverseLp:
        return solve_lambda1_inverse_lp(spec.grid, c.p, spec.options);
      case Family::Exponential:
        return solve_lambda1_exponential(spec.grid, c.alpha, spec.options);
      case Family::Lp:
        throw Error(ErrorCode::InvalidArgument, "lambda_1 is implemented for the decreasing families only");
    }
  }
  throw Error(ErrorCode::InvalidArgument, "lambda_2 is computed by lambda2_two_ball");
}

}  // namespace potopt
