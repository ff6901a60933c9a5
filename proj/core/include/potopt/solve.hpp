#pragma once

#include <optional>
#include <vector>

#include "potopt/functionals.hpp"
#include "potopt/grid.hpp"
#include "potopt/optimize.hpp"
#include "potopt/recover.hpp"

namespace potopt {

enum class Objective { Energy, Lambda1, Lambda2 };

struct ProblemSpec {
  Grid grid;
  std::optional<Field> f;
  ConstraintSpec constraint;
  Objective objective = Objective::Energy;
  SolverOptions options{};
};

struct Diagnostics {
  /// E_f(V*) - J(u*) for energy runs, lambda_1(V*) - F(u*) for lambda_1 runs.
  double duality_gap = 0.0;
  /// integral Psi(V*) - 1.
  double constraint_residual = 0.0;
  /// ||solve_linear(V*, f) - u*|| / ||u*|| (energy) or the relative sphere
  /// stationarity residual (lambda_1).
  double el_residual = 0.0;
  double support_radius = 0.0;
  /// Lp runs: relative gap in the Hoelder equality for integral u^2 V.
  double holder_gap = 0.0;
  /// Value of the optimal potential's cost: E_f(V*) or lambda_1(V*).
  double potential_cost = 0.0;
};

struct SolveResult {
  Field u;
  RecoveredPotential potential;
  /// Minimum of the auxiliary functional (epsilon = 0).
  double objective = 0.0;
  double multiplier = 0.0;
  Diagnostics diagnostics{};
  bool converged = false;
  int iterations = 0;
  std::vector<double> epsilon_history{};
  std::vector<double> support_history{};
};

/// max E_f(V) over integral V^p <= 1, p > 1 (minimize Jp, recover).
SolveResult solve_energy_lp(const Field& f, double p, const SolverOptions& options = {});

/// Same for p = 1 (continuation and active-set polish on J1).
SolveResult solve_energy_l1(const Field& f, const SolverOptions& options = {});

/// min E_f(V) over integral V^{-p} <= 1, with epsilon continuation.
SolveResult solve_energy_inverse_lp(const Field& f, double p, const SolverOptions& options = {});

/// min E_f(V) over integral e^{-alpha V} <= 1, with epsilon continuation.
SolveResult solve_energy_exponential(const Field& f, double alpha, const SolverOptions& options = {});

/// min lambda_1(V) over integral V^{-p} <= 1 on the grid, epsilon continuation.
SolveResult solve_lambda1_inverse_lp(const Grid& grid, double p, const SolverOptions& options = {});

/// min lambda_1(V) over integral e^{-alpha V} <= 1.
SolveResult solve_lambda1_exponential(const Grid& grid, double alpha, const SolverOptions& options = {});

/// Dispatch on objective and constraint family. Lambda2 is handled by
/// lambda2_two_ball and is rejected here.
SolveResult solve(const ProblemSpec& spec);

/// Default epsilon continuation factors (times the problem scale).
std::vector<double> default_epsilon_schedule();

}  // namespace potopt
