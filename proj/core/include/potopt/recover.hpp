#pragma once

#include <cstddef>
#include <vector>

#include "potopt/functionals.hpp"
#include "potopt/grid.hpp"
#include "potopt/optimize.hpp"

namespace potopt {

/// Optimal potential reconstructed from an auxiliary minimizer.
///
/// Infinite values are stored as kWallPotential; `finite` marks the nodes
/// where the formula gave a finite value, so integrals over {V < inf} are
/// exact set operations.
struct RecoveredPotential {
  Field V;
  std::vector<bool> finite{};
  /// Lambda_u for the decreasing families, 0 otherwise.
  double multiplier = 0.0;
  std::vector<std::size_t> omega_plus{};
  std::vector<std::size_t> omega_minus{};
  double M = 0.0;
  bool nonnegative = true;
};

/// V = (integral |u|^{2p/(p-1)})^{-1/p} |u|^{2/(p-1)}, p > 1.
RecoveredPotential recover_lp(const Field& u, double p);

/// V = (chi_{omega+} f - chi_{omega-} f) / M with omega+- = {+-u >= M - kappa}.
/// kappa <= 0 selects contact_threshold(grid, M). Throws
/// DegenerateContactSet when both sets are empty, SignViolation when f < 0
/// somewhere on omega+ or f > 0 on omega- (beyond rounding).
RecoveredPotential recover_l1(const Field& u, const Field& f, double kappa = 0.0);

/// Same potential from the exact discrete contact data of minimize_sup_norm:
/// V_i = |contact force_i| / (w_i M) on the contact sets, which integrates
/// to exactly 1.
RecoveredPotential recover_l1(const SupNormResult& solution, const Field& f);

/// V = (integral |u|^{2p/(p+1)})^{1/p} |u|^{-2/(p+1)}, infinite where u = 0.
RecoveredPotential recover_inverse_lp(const Field& u, double p);

/// V = (log integral u^2 - log u^2) / alpha, infinite where u = 0. The
/// `nonnegative` flag records whether V >= 0 held at every node.
RecoveredPotential recover_exponential(const Field& u, double alpha);

/// Lambda_u with integral Psi((Psi')^{-1}(Lambda_u u^2)) = 1, by bisection
/// on log |Lambda|. Only the decreasing families (InverseLp, Exponential)
/// have such a multiplier. Throws BracketingFailure if no sign change is found.
double multiplier_root(const ConstraintSpec& psi, const Field& u);

/// Closed-form multiplier for the same families.
double multiplier_closed_form(const ConstraintSpec& psi, const Field& u);

/// V = (Psi')^{-1}(Lambda u^2) for a given multiplier.
RecoveredPotential potential_from_multiplier(const ConstraintSpec& psi, const Field& u, double multiplier);

/// integral Psi(V) over the finite nodes (the constraint functional).
double constraint_integral(const ConstraintSpec& psi, const RecoveredPotential& V);

}  // namespace potopt
