#include "potopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/tridiagonal.hpp"

namespace potopt {
namespace {

double dot_free(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  (void)g;
  return s;
}

bool smooth_kind(const FunctionalKind& kind) {
  switch (kind.tag) {
    case FunctionalTag::Jp:
    case FunctionalTag::Quadratic:
      return true;
    case FunctionalTag::JInvP:
    case FunctionalTag::EnergyExp:
      return kind.epsilon > 0.0;
    default:
      return false;
  }
}

// Search direction from the Hessian model, on the free nodes.
std::vector<double> model_direction(const FunctionalKind& kind, const Field& u, const std::vector<double>& g) {
  const Grid& grid = u.grid();
  const std::size_t first = grid.first_free();
  const std::size_t m = g.size();
  const HessianModel h = hessian_model(kind, u);
  Tridiagonal a = assemble_operator(Field(grid));
  for (std::size_t j = 0; j < m; ++j) a.diag[j] += h.diag[first + j];
  std::vector<double> b(m);
  for (std::size_t j = 0; j < m; ++j) b[j] = -g[j] / h.scale;
  std::vector<double> y = solve_positive(a, b);
  if (h.coeff != 0.0) {
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = h.vec[first + j];
    const std::vector<double> z = solve_positive(a, v);
    const double denom = 1.0 + h.coeff * dot_free(grid, v, z);
    if (denom > 1e-12) {
      const double c = h.coeff * dot_free(grid, v, y) / denom;
      std::vector<double> d(m);
      for (std::size_t j = 0; j < m; ++j) d[j] = y[j] - c * z[j];
      if (dot_free(grid, d, g) < 0.0) return d;
    }
  }
  return y;
}

// Nodal gradient W G on the free nodes.
std::vector<double> nodal_gradient(const Field& G) {
  const Grid& grid = G.grid();
  std::vector<double> g;
  g.reserve(grid.last_free() - grid.first_free());
  for (std::size_t i = grid.first_free(); i < grid.last_free(); ++i) g.push_back(grid.weight(i) * G[i]);
  return g;
}

Field step(const Field& u, const std::vector<double>& d, double t) {
  Field out = u;
  const std::size_t first = u.grid().first_free();
  for (std::size_t j = 0; j < d.size(); ++j) out[first + j] += t * d[j];
  return out;
}

// Ground state of -Laplacian + V for V bounded below (not necessarily >= 0).
std::pair<double, Field> ground_state(const Field& V) {
  double low = 0.0;
  for (double v : V.values()) low = std::min(low, v);
  Field shifted = V;
  for (double& v : shifted.values()) v = std::min(v - low, kWallPotential);
  Spectrum s = eigenpairs(shifted, 1);
  return {s.eigenvalues[0] + low, std::move(s.eigenfunctions[0])};
}

void normalize_sphere(Field& u) {
  u *= 1.0 / norm_l2(u);
  u *= 1.0 / norm_l2(u);
}

struct ActiveSetSolution {
  Field u;
  double M;
  std::vector<double> force;
};

// Exact discrete J1 minimizer for prescribed contact sets: u = s_i M on the
// active nodes, K u = W f elsewhere, and M equal to the signed contact force.
ActiveSetSolution solve_active(const Field& f, const std::vector<int>& sign) {
  const Grid& grid = f.grid();
  const std::size_t first = grid.first_free();
  const std::size_t m = grid.last_free() - first;
  const auto c = grid.conductances();
  Tridiagonal a = assemble_operator(Field(grid));
  std::vector<double> r0(m), r1(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = first + j;
    if (sign[i] != 0) {
      a.diag[j] = 1.0;
      a.sub[j] = a.super[j] = 0.0;
      r0[j] = 0.0;
      r1[j] = sign[i];
      continue;
    }
    r0[j] = grid.weight(i) * f[i];
    if (j > 0 && sign[i - 1] != 0) {
      r1[j] += c[i - 1] * sign[i - 1];
      a.sub[j] = 0.0;
    }
    if (j + 1 < m && sign[i + 1] != 0) {
      r1[j] += c[i] * sign[i + 1];
      a.super[j] = 0.0;
    }
  }
  const auto x0 = solve_positive(a, r0);
  const auto x1 = solve_positive(a, r1);
  Field u0(grid), u1(grid);
  for (std::size_t j = 0; j < m; ++j) {
    u0[first + j] = x0[j];
    u1[first + j] = x1[j];
  }
  const Field k0 = stiffness_action(u0);
  const Field k1 = stiffness_action(u1);
  double num = 0.0, den = 1.0;
  for (std::size_t i = first; i < grid.last_free(); ++i) {
    if (sign[i] == 0) continue;
    num += sign[i] * (grid.weight(i) * f[i] - k0[i]);
    den += sign[i] * k1[i];
  }
  const double M = num / den;
  Field u = u0 + M * u1;
  const Field ku = stiffness_action(u);
  std::vector<double> force(grid.size(), 0.0);
  for (std::size_t i = first; i < grid.last_free(); ++i)
    if (sign[i] != 0) force[i] = grid.weight(i) * f[i] - ku[i];
  return {std::move(u), M, std::move(force)};
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
  if (!(gtol > 0.0)) throw Error(ErrorCode::InvalidArgument, "gtol must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw Error(ErrorCode::InvalidArgument, "backtrack factor must lie in (0,1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw Error(ErrorCode::InvalidArgument, "Armijo constant must lie in (0,1)");
  if (schedule.size() >= 2) {
    const bool down = schedule[1] < schedule[0];
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      const bool ok = down ? schedule[i] < schedule[i - 1] : schedule[i] > schedule[i - 1];
      if (!ok) throw Error(ErrorCode::InvalidArgument, "continuation schedule must be strictly monotone");
    }
  }
}

MinimizeResult minimize(const FunctionalKind& kind, const Field& u0, const SolverOptions& options) {
  options.validate();
  if (!smooth_kind(kind)) throw Error(ErrorCode::InvalidArgument, "minimize needs a smooth non-spectral functional");
  Field u = u0;
  u.apply_dirichlet();
  double F = eval(kind, u);
  Field G = gradient(kind, u);
  double gnorm = norm_l2(G);
  int it = 0;
  bool converged = gnorm <= options.gtol * (1.0 + std::abs(F));
  constexpr double rounding = 64.0 * std::numeric_limits<double>::epsilon();

  while (!converged && it < options.max_iter) {
    ++it;
    const std::vector<double> g = nodal_gradient(G);
    std::vector<double> d = model_direction(kind, u, g);
    double slope = dot_free(u.grid(), g, d);
    if (!(slope < 0.0)) {
      d = g;
      for (double& v : d) v = -v;
      slope = dot_free(u.grid(), g, d);
    }
    // the model predicts a decrease of about -slope/2; nothing left to gain
    if (-slope <= rounding * (1.0 + std::abs(F))) {
      converged = true;
      break;
    }
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k, t *= options.backtrack) {
      Field trial = step(u, d, t);
      const double Ft = eval(kind, trial);
      if (Ft <= F + options.armijo * t * slope) {
        u = std::move(trial);
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    G = gradient(kind, u);
    gnorm = norm_l2(G);
    converged = gnorm <= options.gtol * (1.0 + std::abs(F));
  }
  return {std::move(u), F, gnorm, it, converged};
}

std::vector<double> default_p_schedule() {
  std::vector<double> p;
  for (int k = 0; k <= 10; ++k) p.push_back(1.0 + std::ldexp(1.0, -k));
  return p;
}

double contact_threshold(const Grid& grid, double M) { return std::max(10.0 * grid.spacing() * M, 1e-3 * M); }

SupNormResult minimize_sup_norm(const Field& f, const SolverOptions& options) {
  options.validate();
  const Grid& grid = f.grid();
  const std::vector<double> schedule = options.schedule.empty() ? default_p_schedule() : options.schedule;
  for (double p : schedule)
    if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "continuation values must exceed 1");

  SupNormResult out{Field(grid)};
  Field u(grid);
  bool all_converged = true;
  for (double p : schedule) {
    MinimizeResult r = minimize(FunctionalKind::jp(p, f), u, options);
    all_converged = all_converged && r.converged;
    out.iterations += r.iterations;
    u = std::move(r.u);
    out.p_history.push_back(p);
    out.M_history.push_back(norm_inf(u));
  }

  const double M0 = norm_inf(u);
  const std::size_t first = grid.first_free(), last = grid.last_free();
  std::vector<int> sign(grid.size(), 0);
  if (M0 > 0.0) {
    const double kappa = contact_threshold(grid, M0);
    for (std::size_t i = first; i < last; ++i) {
      if (u[i] >= M0 - kappa) sign[i] = 1;
      if (-u[i] >= M0 - kappa) sign[i] = -1;
    }
  }
  if (std::none_of(sign.begin(), sign.end(), [](int s) { return s != 0; })) {
    out.u = std::move(u);
    out.M = M0;
    out.value = eval(FunctionalKind::j1(f), out.u);
    out.contact_force.assign(grid.size(), 0.0);
    out.degenerate = true;
    out.converged = all_converged;
    return out;
  }

  // primal-dual active-set iteration on the exact problem
  std::set<std::vector<int>> seen;
  bool settled = false;
  ActiveSetSolution sol = solve_active(f, sign);
  for (int it = 0; it < 500; ++it) {
    seen.insert(sign);
    std::vector<int> next(grid.size(), 0);
    for (std::size_t i = first; i < last; ++i) {
      const double c = (i > 0 ? grid.conductance(i - 1) : 0.0) + grid.conductance(i);
      const double mu = sol.force[i];
      if (mu + c * (sol.u[i] - sol.M) > 0.0) next[i] = 1;
      else if (-mu + c * (-sol.M - sol.u[i]) > 0.0) next[i] = -1;
    }
    if (next == sign) {
      settled = true;
      break;
    }
    if (seen.count(next) != 0 || std::none_of(next.begin(), next.end(), [](int s) { return s != 0; })) break;
    sign = std::move(next);
    sol = solve_active(f, sign);
  }

  if (!(sol.M > 0.0)) {
    out.u = Field(grid);
    out.M = 0.0;
    out.value = 0.0;
    out.contact_force.assign(grid.size(), 0.0);
    out.degenerate = true;
    out.converged = all_converged;
    return out;
  }
  // feasibility of the final active-set solution
  const double tol = 1e-10 * sol.M;
  bool feasible = true;
  for (std::size_t i = first; i < last; ++i) {
    if (std::abs(sol.u[i]) > sol.M + tol) feasible = false;
    if (sign[i] * sol.force[i] < -1e-10 * std::abs(sol.M)) feasible = false;
  }
  out.u = std::move(sol.u);
  out.M = sol.M;
  out.contact_force = std::move(sol.force);
  for (std::size_t i = first; i < last; ++i) {
    if (sign[i] > 0) out.omega_plus.push_back(i);
    if (sign[i] < 0) out.omega_minus.push_back(i);
  }
  out.value = eval(FunctionalKind::j1(f), out.u);
  out.converged = settled && feasible;
  return out;
}

SphereResult minimize_on_sphere(const FunctionalKind& kind, const Field& u0, const SolverOptions& options) {
  options.validate();
  if (!kind.spectral()) throw Error(ErrorCode::InvalidArgument, "minimize_on_sphere needs a spectral functional");
  Field u = u0;
  u.apply_dirichlet();
  if (norm_l2(u) == 0.0) throw Error(ErrorCode::ZeroMinimizer, "initial guess vanishes");
  normalize_sphere(u);

  auto measure = [&](const Field& v, double& F, double& lambda, double& residual) {
    F = eval(kind, v);
    Field G = gradient(kind, v);
    lambda = inner(G, v);
    G -= lambda * v;
    residual = norm_l2(G);
  };
  double F = 0.0, lambda = 0.0, residual = 0.0;
  measure(u, F, lambda, residual);
  bool converged = residual <= options.gtol * (1.0 + std::abs(F));
  int it = 0;
  int stalled = 0;
  while (!converged && it < options.max_iter) {
    ++it;
    auto [mu, next] = ground_state(constraint_potential(kind, u));
    (void)mu;
    normalize_sphere(next);
    double Fn = 0.0, ln = 0.0, rn = 0.0;
    measure(next, Fn, ln, rn);
    if (Fn > F + 1e-14 * std::abs(F)) {
      converged = Fn - F <= 1e-10 * (1.0 + std::abs(F));
      break;
    }
    stalled = (F - Fn <= 1e-15 * std::abs(F)) ? stalled + 1 : 0;
    u = std::move(next);
    F = Fn;
    lambda = ln;
    residual = rn;
    converged = residual <= options.gtol * (1.0 + std::abs(F));
    if (stalled >= 5) {
      converged = true;
      break;
    }
  }
  return {std::move(u), F, lambda, residual, it, converged};
}

}  // namespace potopt
