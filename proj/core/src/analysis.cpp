#include "potopt/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

namespace potopt {
namespace {

// Least-squares slope of y against x.
std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

double power_integral(const Field& u, double r) {
  const auto w = u.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::abs(u[i]), r);
  return s;
}

Field mirrored_line(const Field& Vrad, double spacing, const std::vector<std::size_t>& centers, std::size_t nodes) {
  const std::size_t reach = Vrad.size() - 2;
  Grid line = make_interval(0.0, spacing * static_cast<double>(nodes - 1), nodes);
  Field V(line);
  for (std::size_t j = 0; j < nodes; ++j) {
    double v = kWallPotential;
    for (std::size_t c : centers) {
      const std::size_t k = j > c ? j - c : c - j;
      if (k <= reach) v = std::min(v, Vrad[k]);
    }
    V[j] = v;
  }
  return V;
}

Field dilated_well(const SolveResult& base, double t) {
  Field V = base.potential.V;
  for (std::size_t i = 0; i < V.size(); ++i)
    V[i] = base.potential.finite[i] ? std::min(t * t * V[i], kWallPotential) : kWallPotential;
  return V;
}

}  // namespace

SupportReport support_radius(const Field& u, double eps_supp) {
  const Grid& g = u.grid();
  const double M = norm_inf(u);
  const double thr = eps_supp > 0.0 ? eps_supp : 1e-8 * M;
  std::size_t lo = g.size(), hi = 0, top = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > thr) {
      lo = std::min(lo, i);
      hi = i;
    }
    if (std::abs(u[i]) > std::abs(u[top])) top = i;
  }
  if (!(M > 0.0) || lo == g.size()) throw Error(ErrorCode::AllBelowThreshold, "no node exceeds the support threshold");

  SupportReport rep;
  rep.spacing = g.spacing();
  if (g.kind() == GridKind::Radial) {
    rep.support_radius = g.node(hi);
    rep.truncation_radius = g.upper();
  } else {
    rep.support_radius = 0.5 * (g.node(hi) - g.node(lo));
    rep.truncation_radius = 0.5 * (g.upper() - g.lower());
  }

  const double R = rep.truncation_radius;
  if (g.kind() == GridKind::Radial && rep.support_radius >= 0.5 * R) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i <= hi; ++i) {
      const double r = g.node(i);
      if (r >= 2.0 && r <= 0.5 * R && u[i] != 0.0) {
        x.push_back(std::log(r));
        y.push_back(std::log(std::abs(u[i])));
      }
    }
    if (x.size() >= 20) rep.decay_slope = fit_slope(x, y);
  }
  if (!rep.decay_slope) {
    const double edge = g.node(std::min(hi + 1, g.size() - 1));
    std::vector<double> x, y;
    for (std::size_t i = top; i < hi; ++i) {
      const double a = std::abs(u[i]);
      if (a >= 1e-4 * M && a <= 1e-3 * M) {
        x.push_back(std::log(edge - g.node(i)));
        y.push_back(std::log(a));
      }
    }
    if (x.size() >= 3) {
      rep.decay_slope = fit_slope(x, y);
      rep.edge_fit = true;
    }
  }
  return rep;
}

SupportReport compare_support(SupportReport base, const SupportReport& doubled) {
  base.compared = true;
  base.stable = std::abs(base.support_radius - doubled.support_radius) < 2.0 * std::max(base.spacing, doubled.spacing);
  return base;
}

DecayCheck ode_decay_check(const Field& u, double p, int d, const DecayCheckOptions& options) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "p must be positive");
  const Grid& g = u.grid();
  if (g.dimension() != d) throw Error(ErrorCode::InvalidArgument, "dimension does not match the grid");
  DecayCheck out;
  const double M = norm_inf(u);
  if (!(M > 0.0)) return out;
  const double thr = options.eps_supp > 0.0 ? options.eps_supp : 1e-8 * M;
  const double s = (p - 1.0) / (p + 1.0);
  const double r = 2.0 * p / (p + 1.0);
  out.Cp = std::pow(power_integral(u, r), 1.0 / p);
  const bool spectral = options.lambda > 0.0;
  out.C = spectral ? std::sqrt(out.Cp / (2.0 * (s + 1.0))) : std::sqrt(2.0 * out.Cp / (s + 1.0));
  const double h = g.spacing();
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (g.node(i) < options.tail_start) continue;
    const double v0 = std::abs(u[i]), v1 = std::abs(u[i + 1]);
    if (v0 <= thr || v1 <= thr) continue;
    const double vm = 0.5 * (v0 + v1);
    if (spectral && options.lambda * std::pow(vm, 1.0 - s) > out.Cp / (s + 1.0)) continue;
    ++out.checked;
    const double lhs = -(v1 - v0) / h;
    const double rhs = (1.0 - options.slack) * out.C * std::pow(vm, 0.5 * (s + 1.0));
    if (lhs < rhs) out.violations.push_back(i);
  }
  if (out.checked > 0) {
    out.fraction = 1.0 - static_cast<double>(out.violations.size()) / static_cast<double>(out.checked);
    out.pass = out.fraction >= options.required_fraction;
  }
  return out;
}

CounterexampleReport counterexample_energy(std::size_t n, std::size_t j, std::size_t grid_nodes, double p) {
  if (n < 1 || j < 1) throw Error(ErrorCode::InvalidArgument, "n and j must be positive");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "the counterexample needs 0 < p < 1");
  const std::size_t cells = 20 * n * j;
  if (grid_nodes == 0) grid_nodes = cells + 1;
  if (grid_nodes - 1 < cells) throw Error(ErrorCode::UnderResolvedGrid, "grid must have at least 20 n j cells");
  if ((grid_nodes - 1) % (n * j) != 0)
    throw Error(ErrorCode::UnderResolvedGrid, "grid must place nodes at k/n and k/n +- 1/j");
  const Grid g = make_interval(0.0, 1.0, grid_nodes);
  const std::size_t per_cell = (grid_nodes - 1) / n;
  const std::size_t half_bump = (grid_nodes - 1) / j;
  const double Cn = std::pow(2.0 * static_cast<double>(n - 1), -1.0 / p);
  const double height = Cn * std::pow(static_cast<double>(j), 1.0 / p);

  Field V(g), walls(g);
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t c = k * per_cell;
    walls[c] = kWallPotential;
    const std::size_t a = c >= half_bump ? c - half_bump : 0;
    const std::size_t b = std::min(c + half_bump, grid_nodes - 1);
    for (std::size_t i = a; i <= b; ++i) {
      // end nodes carry half of the quadrature mass of V^p
      const double v = (i == c - half_bump || i == c + half_bump) ? std::pow(0.5, 1.0 / p) * height : height;
      V[i] += v;
    }
  }
  const Field f(g, [](double) { return 1.0; });
  CounterexampleReport rep;
  rep.n = n;
  rep.j = j;
  rep.grid_nodes = grid_nodes;
  rep.p = p;
  rep.energy = energy_of_potential(V, f);
  rep.hard_wall_energy = energy_of_potential(walls, f);
  rep.limit_energy = -1.0 / (24.0 * static_cast<double>(n * n));
  rep.budget = power_integral(V, p);
  return rep;
}

std::vector<double> gamma_convergence_demo(const std::vector<Field>& Vseq, const Field& Vlimit) {
  const Field w = torsion(Vlimit);
  std::vector<double> out;
  out.reserve(Vseq.size());
  for (const Field& V : Vseq) {
    require_same_grid(V, Vlimit);
    out.push_back(norm_l2(torsion(V) - w));
  }
  return out;
}

GnsReport gns_stationarity(const Field& u, double p, int d) {
  if (!(p > 0.0) || d < 1) throw Error(ErrorCode::InvalidArgument, "need p > 0 and d >= 1");
  GnsReport rep;
  const double r = 2.0 * p / (p + 1.0);
  const double Ir = power_integral(u, r);
  rep.A = dirichlet_form(u, u);
  rep.B = std::pow(Ir, (p + 1.0) / p);
  rep.g1 = rep.A + rep.B;
  rep.dg1 = 2.0 * rep.A - d / p * rep.B;
  rep.ratio = rep.g1 > 0.0 ? std::abs(rep.dg1) / rep.g1 : 0.0;
  const double theta = d / (d + 2.0 * p);
  rep.best_constant =
      norm_l2(u) / (std::pow(rep.A, 0.5 * theta) * std::pow(Ir, 1.0 / r * 2.0 * p / (d + 2.0 * p)));
  return rep;
}

std::vector<BudgetPoint> budget_scaling_lambda1(const SolveResult& base, double p, const std::vector<double>& budgets) {
  const Grid& g = base.u.grid();
  if (g.kind() != GridKind::Radial) throw Error(ErrorCode::InvalidArgument, "budget scaling needs a radial run");
  const int d = g.dimension();
  const double lambda = eigenpairs(base.potential.V, 1).eigenvalues[0];
  std::vector<BudgetPoint> out;
  for (double m : budgets) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "budgets must be positive");
    BudgetPoint pt;
    pt.budget = m;
    pt.t = std::pow(m, -1.0 / (2.0 * p + d));
    pt.lambda1 = pt.t * pt.t * lambda;
    const Grid scaled = make_radial(g.upper() / pt.t, d, g.size());
    const Field V = dilated_well(base, pt.t);
    pt.lambda1_direct = eigenpairs(Field(scaled, std::vector<double>(V.values().begin(), V.values().end())), 1)
                            .eigenvalues[0];
    out.push_back(pt);
  }
  return out;
}

TwoBallReport lambda2_two_ball(const SolveResult& base, double p, std::size_t gap_nodes) {
  const Grid& g = base.u.grid();
  if (g.kind() != GridKind::Radial || g.dimension() != 1)
    throw Error(ErrorCode::InvalidArgument, "two-ball construction needs a radial d = 1 run");
  if (gap_nodes < 2) throw Error(ErrorCode::OverlappingSupports, "wells must be separated by at least 2h");
  const std::size_t n = g.size();

  // full-line budget 1/2 per well is half-line budget 1/4
  const double t = std::pow(0.25, -1.0 / (2.0 * p + 1.0));
  const Field well = dilated_well(base, t);
  const double spacing = g.spacing() / t;
  const std::size_t c1 = n - 1;
  const std::size_t c2 = c1 + 2 * n - 3 + gap_nodes;
  const std::size_t nodes = c2 + n;
  Field V = mirrored_line(well, spacing, {c1, c2}, nodes);
  const Spectrum s = eigenpairs(V, 2);

  TwoBallReport rep{std::move(V)};
  rep.lambda1 = s.eigenvalues[0];
  rep.lambda2 = s.eigenvalues[1];
  rep.gap_nodes = gap_nodes;
  rep.lambda1_half = budget_scaling_lambda1(base, p, {0.25}).front().lambda1;

  const double t1 = std::pow(0.5, -1.0 / (2.0 * p + 1.0));
  const Field single = mirrored_line(dilated_well(base, t1), g.spacing() / t1, {n - 1}, 2 * n - 1);
  rep.lambda2_single = eigenpairs(single, 2).eigenvalues[1];
  return rep;
}

}  // namespace potopt
