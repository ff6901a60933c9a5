#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "potopt/grid.hpp"
#include "potopt/optimize.hpp"

namespace potopt {

struct SolveResult;

struct SupportReport {
  /// Largest node coordinate with |u| > eps_supp (radial); half the width
  /// of the above-threshold range (interval).
  double support_radius = 0.0;
  double truncation_radius = 0.0;
  double spacing = 0.0;
  /// Set by compare_support only.
  bool compared = false;
  bool stable = false;
  /// Power-law tail slope d log|u| / d log r over r in [2, R/2] when the
  /// support fills that window; otherwise the vanishing order at the edge,
  /// d log|u| / d log(r_s - r), over amplitudes [1e-4, 1e-3] ||u||_inf.
  std::optional<double> decay_slope;
  bool edge_fit = false;
};

/// eps_supp <= 0 selects 1e-8 ||u||_inf. Throws AllBelowThreshold when no
/// node exceeds the threshold.
SupportReport support_radius(const Field& u, double eps_supp = 0.0);

/// Marks `base` stable when the support of the run on the doubled domain
/// lies within 2h of it.
SupportReport compare_support(SupportReport base, const SupportReport& doubled);

struct DecayCheckOptions {
  /// Start of the tail (outside supp f).
  double tail_start = 1.0;
  /// 0 for the energy problem; the eigenvalue for the lambda_1 problem,
  /// which switches to the weakened bound valid where lambda v^{1-s} <= C_p/(s+1).
  double lambda = 0.0;
  /// Relative slack on the right-hand side.
  double slack = 1e-2;
  double eps_supp = 0.0;
  double required_fraction = 0.95;
};

struct DecayCheck {
  bool pass = true;
  double fraction = 1.0;
  std::size_t checked = 0;
  std::vector<std::size_t> violations;
  double C = 0.0;
  double Cp = 0.0;
};

/// Checks -v' >= C v^{(s+1)/2}, s = (p-1)/(p+1), on the tail edges of a
/// radial profile, with C_p = (integral |u|^{2p/(p+1)})^{1/p} from u.
DecayCheck ode_decay_check(const Field& u, double p, int d, const DecayCheckOptions& options = {});

struct CounterexampleReport {
  std::size_t n = 0;
  std::size_t j = 0;
  std::size_t grid_nodes = 0;
  double p = 0.5;
  /// E_1(V_j^n).
  double energy = 0.0;
  /// Hard walls at k/n on the same grid.
  double hard_wall_energy = 0.0;
  /// -1/(24 n^2).
  double limit_energy = 0.0;
  /// integral (V_j^n)^p, equal to 1.
  double budget = 0.0;
};

/// Omega = (0,1), f = 1. grid_nodes = 0 picks 20 n j + 1 nodes; fewer than
/// 20 n j cells throws UnderResolvedGrid.
CounterexampleReport counterexample_energy(std::size_t n, std::size_t j, std::size_t grid_nodes = 0, double p = 0.5);

/// d_gamma(V_n, V) = || w_{V_n} - w_V ||_{L2} with w the torsion function.
std::vector<double> gamma_convergence_demo(const std::vector<Field>& Vseq, const Field& Vlimit);

struct GnsReport {
  /// |g'(1)| / g(1).
  double ratio = 0.0;
  /// integral |grad u|^2.
  double A = 0.0;
  /// (integral |u|^{2p/(p+1)})^{(p+1)/p}.
  double B = 0.0;
  double g1 = 0.0;
  double dg1 = 0.0;
  /// ||u||_2 / (||grad u||_2^{d/(d+2p)} ||u||_r^{2p/(d+2p)}).
  double best_constant = 0.0;
};

/// Dilation stationarity of g(t) = t^2 A + t^{-d/p} B at t = 1.
GnsReport gns_stationarity(const Field& u, double p, int d);

struct BudgetPoint {
  double budget = 0.0;
  /// Dilation factor t = m^{-1/(2p+d)}.
  double t = 0.0;
  /// t^2 lambda_1(V*).
  double lambda1 = 0.0;
  /// lambda_1 of the dilated potential on the dilated grid.
  double lambda1_direct = 0.0;
};

/// lambda_1 under integral V^{-p} <= m from the budget-1 optimum `base`
/// (radial lambda_1 run), via V_m(r) = t^2 V*(t r) on the grid with spacing h/t.
/// For d = 1 budgets refer to the half-line.
std::vector<BudgetPoint> budget_scaling_lambda1(const SolveResult& base, double p, const std::vector<double>& budgets);

struct TwoBallReport {
  Field potential;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  /// lambda_1 of one half-budget well (from the budget scaling).
  double lambda1_half = 0.0;
  /// lambda_2 of a single full-budget well on a line grid.
  double lambda2_single = 0.0;
  std::size_t gap_nodes = 0;
};

/// Two mirrored copies of the half-line optimum `base` (d = 1), each scaled
/// to full-line budget 1/2, on one interval grid with `gap_nodes` wall nodes
/// between their sets of finiteness. Throws OverlappingSupports when
/// gap_nodes < 2, InvalidArgument unless the base grid is radial with d = 1.
TwoBallReport lambda2_two_ball(const SolveResult& base, double p, std::size_t gap_nodes = 4);

}  // namespace potopt
