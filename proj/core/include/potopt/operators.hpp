#pragma once

#include <cstddef>
#include <vector>

#include "potopt/grid.hpp"
#include "potopt/tridiagonal.hpp"

namespace potopt {

/// Stand-in for V = +infinity (a hard wall). Potentials read from files or
/// produced by recovery formulas are clamped to this value.
inline constexpr double kWallPotential = 1e12;

/// Replace +inf (and anything above the wall value) by kWallPotential.
/// Throws NegativePotential for negative or NaN entries.
Field clamp_potential(Field V);

/// Dirichlet form a(u,v) = sum over edges of c_e (u_{i+1}-u_i)(v_{i+1}-v_i),
/// the discrete integral of grad u . grad v.
double dirichlet_form(const Field& u, const Field& v);

/// Nodal stiffness action K u (weights not divided out); zero on Dirichlet nodes.
Field stiffness_action(const Field& u);

/// K + W diag(V - shift) restricted to the free nodes.
Tridiagonal assemble_operator(const Field& V, double shift = 0.0);

/// (-Laplacian + V) u at every free node; Dirichlet nodes are set to 0.
/// Interval: -u''. Radial: -u'' - (d-1)/r u', with 2d (u_0 - u_1)/h^2 at r = 0.
Field apply_operator(const Field& V, const Field& u);

/// Solve -Laplacian u + V u = f with homogeneous Dirichlet conditions by a
/// direct tridiagonal factorization. Throws NegativePotential if V < 0.
Field solve_linear(const Field& V, const Field& f);

/// E_f(V) = -1/2 integral of f u_V.
double energy_of_potential(const Field& V, const Field& f);

/// Torsion function w_V: solve_linear with f = 1.
Field torsion(const Field& V);

struct Spectrum {
  std::vector<double> eigenvalues;
  /// Normalized so that the integral of u^2 is 1.
  std::vector<Field> eigenfunctions;
  /// Relative residuals ||(-Laplacian+V)u - lambda u|| / lambda.
  std::vector<double> residuals;
  int iterations = 0;
};

/// Residual tolerance relative to the eigenvalue, plus a rounding floor of
/// 64 eps || |A| |u| || (reached first on very fine grids).
struct EigenOptions {
  double tolerance = 1e-8;
  int max_iterations = 10000;
};

/// First k Dirichlet eigenpairs of -Laplacian + V by inverse iteration with
/// deflation, followed by Rayleigh-quotient refinement.
Spectrum eigenpairs(const Field& V, std::size_t k, const EigenOptions& options = {});

/// Eigenpairs of a symmetric tridiagonal matrix (lowest k), same algorithm.
/// Vectors are Euclidean-normalized.
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;
  int iterations = 0;
};
TridiagonalEigen lowest_eigenpairs(const Tridiagonal& s, std::size_t k, const EigenOptions& options = {});

}  // namespace potopt
