#pragma once

#include <cstddef>
#include <vector>

#include "potopt/functionals.hpp"
#include "potopt/grid.hpp"

namespace potopt {

struct SolverOptions {
  int max_iter = 100000;
  double gtol = 1e-8;
  double backtrack = 0.5;
  double armijo = 1e-4;
  /// p values for minimize_sup_norm, epsilon values for the singular
  /// pipelines. Empty means the built-in default.
  std::vector<double> schedule{};

  /// Throws InvalidArgument on out-of-range values or a non-monotone schedule.
  void validate() const;
};

struct MinimizeResult {
  Field u;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Descent with Armijo backtracking for the smooth kinds (Jp, JInvP and
/// EnergyExp with epsilon > 0, Quadratic). Search directions come from the
/// positive semidefinite Hessian model, solved by a tridiagonal factorization
/// plus a Sherman-Morrison correction; a failed model step falls back to the
/// preconditioned gradient. Stops when ||G|| <= gtol (1 + |F|) or when the
/// predicted decrease is below rounding.
MinimizeResult minimize(const FunctionalKind& kind, const Field& u0, const SolverOptions& options = {});

struct SupNormResult {
  Field u;
  double M = 0.0;
  /// J1(u).
  double value = 0.0;
  std::vector<std::size_t> omega_plus{};
  std::vector<std::size_t> omega_minus{};
  /// Nodal contact forces w_i f_i - (K u)_i, zero away from the contact sets.
  std::vector<double> contact_force{};
  std::vector<double> p_history{};
  std::vector<double> M_history{};
  bool degenerate = false;
  bool converged = false;
  int iterations = 0;
};

/// Default continuation 2, 1.5, 1.25, ..., 1 + 2^-10.
std::vector<double> default_p_schedule();

/// Contact-set threshold kappa = max(10 h M, 1e-3 M).
double contact_threshold(const Grid& grid, double M);

/// Minimizer of J1 with source f. Runs the p -> 1 continuation on Jp
/// (warm-started), seeds the contact sets from the last iterate with
/// threshold kappa, then solves the exact discrete J1 problem by a
/// primal-dual active-set iteration in which M is an unknown.
SupNormResult minimize_sup_norm(const Field& f, const SolverOptions& options = {});

struct SphereResult {
  Field u;
  double value = 0.0;
  /// Lambda with G = Lambda u at stationarity (twice the eigenvalue).
  double multiplier = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimize a spectral kind over the unit L2 sphere by alternating between
/// the potential V(u) and the ground state of -Laplacian + V. Each step
/// lowers the objective; every iterate satisfies |integral u^2 - 1| <= 1e-12.
/// Five consecutive steps with no decrease beyond rounding count as converged.
SphereResult minimize_on_sphere(const FunctionalKind& kind, const Field& u0, const SolverOptions& options = {});

}  // namespace potopt
