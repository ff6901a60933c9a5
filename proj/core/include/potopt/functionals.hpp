#pragma once

#include <optional>
#include <vector>

#include "potopt/grid.hpp"

namespace potopt {

/// Admissible class of potentials, budget normalized to 1:
///   Lp:          integral of V^p      <= 1   (p > 0)
///   InverseLp:   integral of V^{-p}   <= 1   (p > 0)
///   Exponential: integral of e^{-aV}  <= 1   (a > 0)
struct ConstraintSpec {
  enum class Family { Lp, InverseLp, Exponential };

  Family family = Family::Lp;
  double p = 0.0;
  double alpha = 0.0;

  static ConstraintSpec lp(double p);
  static ConstraintSpec inverse_lp(double p);
  static ConstraintSpec exponential(double alpha);
};

enum class FunctionalTag {
  Jp,           ///< 1/2|grad u|^2 + 1/2 ||u||_{2p/(p-1)}^2 - f u, p > 1
  J1,           ///< 1/2|grad u|^2 + 1/2 ||u||_inf^2 - f u
  JInvP,        ///< 1/2|grad u|^2 + 1/2 ||u||_{2p/(p+1)}^2 - f u, p > 0
  Lambda1InvP,  ///< |grad u|^2 + ||u||_{2p/(p+1)}^2 on the unit L2 sphere
  Lambda1Exp,   ///< |grad u|^2 + min_V integral u^2 V with Psi = e^{-aV}, on the sphere
  EnergyExp,    ///< 1/2|grad u|^2 + 1/2 min_V integral u^2 V - f u with Psi = e^{-aV}
  Quadratic,    ///< 1/2|grad u|^2 + 1/2 V u^2 - f u for a fixed potential V
};

/// Which auxiliary functional to evaluate, with its parameters.
///
/// Every kind has the form  s * (1/2 a(u,u) + 1/2 c Phi(u) - integral f u)
/// with s = 2 for the spectral kinds (no source) and s = 1 otherwise; c is
/// `weight`. The singular kinds (JInvP, Lambda1InvP, and the exponential
/// pair) replace u^2 by u^2 + epsilon^2 inside Phi when epsilon > 0.
struct FunctionalKind {
  FunctionalTag tag = FunctionalTag::Jp;
  double p = 0.0;
  double alpha = 0.0;
  std::optional<Field> f;
  double epsilon = 0.0;
  double weight = 1.0;
  std::optional<Field> potential;

  static FunctionalKind jp(double p, Field f);
  static FunctionalKind j1(Field f);
  static FunctionalKind jinvp(double p, Field f, double epsilon = 0.0);
  static FunctionalKind lambda1_invp(double p, double epsilon = 0.0);
  static FunctionalKind lambda1_exp(double alpha, double epsilon = 0.0);
  static FunctionalKind energy_exp(double alpha, Field f, double epsilon = 0.0);
  static FunctionalKind quadratic(Field V, Field f);

  bool spectral() const noexcept {
    return tag == FunctionalTag::Lambda1InvP || tag == FunctionalTag::Lambda1Exp;
  }
  /// Overall factor s.
  double scale() const noexcept { return spectral() ? 2.0 : 1.0; }
};

double eval(const FunctionalKind& kind, const Field& u);

/// L2 Riesz representative G of the derivative: d/dt F(u + t v) = integral G v
/// for every v vanishing on the Dirichlet nodes. For J1 this is the
/// subgradient selected by the first maximizer of |u|.
Field gradient(const FunctionalKind& kind, const Field& u);

/// Potential V(u) with 1/2 c grad Phi(u) = W V u: the potential recovered
/// from u for the matching constraint (times the weight c).
Field constraint_potential(const FunctionalKind& kind, const Field& u);

/// Positive semidefinite model of the Hessian, s * (K + diag + coeff vec vec^T),
/// in nodal (weighted) form. Negative diagonal curvature is clipped to zero.
struct HessianModel {
  double scale = 1.0;
  std::vector<double> diag;
  std::vector<double> vec;
  double coeff = 0.0;
};
HessianModel hessian_model(const FunctionalKind& kind, const Field& u);

/// Admissibility of the source exponent q for the unbounded-constraint
/// energy problem in dimension d. q may be +infinity.
bool check_admissible_q(double p, int d, double q);

}  // namespace potopt
