#include "potopt/recover.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "potopt/error.hpp"
#include "potopt/operators.hpp"

namespace potopt {
namespace {

double require_nonzero(const Field& u) {
  const double M = norm_inf(u);
  if (!(M > 0.0)) throw Error(ErrorCode::ZeroMinimizer, "minimizer vanishes identically");
  if (!std::isfinite(M)) throw Error(ErrorCode::InvalidArgument, "minimizer is not finite");
  return M;
}

// sum w (|u|/M)^s over nodes with u != 0
double scaled_power_sum(const Field& u, double M, double s) {
  const auto w = u.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0.0) sum += w[i] * std::pow(std::abs(u[i]) / M, s);
  return sum;
}

RecoveredPotential blank(const Field& u) {
  RecoveredPotential out{Field(u.grid())};
  out.finite.assign(u.size(), true);
  return out;
}

void finish(RecoveredPotential& r) {
  for (std::size_t i = 0; i < r.V.size(); ++i) {
    if (!r.finite[i] || r.V[i] > kWallPotential) r.V[i] = kWallPotential;
    if (r.V[i] < 0.0) r.nonnegative = false;
  }
}

double psi_of(const ConstraintSpec& psi, double V) {
  switch (psi.family) {
    case ConstraintSpec::Family::Lp:
      return std::pow(V, psi.p);
    case ConstraintSpec::Family::InverseLp:
      return std::pow(V, -psi.p);
    case ConstraintSpec::Family::Exponential:
      return std::exp(-psi.alpha * V);
  }
  return 0.0;
}

void require_decreasing(const ConstraintSpec& psi) {
  if (psi.family == ConstraintSpec::Family::Lp)
    throw Error(ErrorCode::InvalidArgument, "the Lp family has no decreasing Psi multiplier");
}

// integral Psi((Psi')^{-1}(-e^L u^2)) - 1, increasing in L
double normalization_defect(const ConstraintSpec& psi, const Field& u, double L) {
  const auto w = u.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const double lu2 = std::log(u[i] * u[i]);
    if (psi.family == ConstraintSpec::Family::InverseLp)
      sum += w[i] * std::exp(psi.p / (psi.p + 1.0) * (L + lu2 - std::log(psi.p)));
    else
      sum += w[i] * std::exp(L + lu2 - std::log(psi.alpha));
  }
  return sum - 1.0;
}

}  // namespace

RecoveredPotential recover_lp(const Field& u, double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "recover_lp requires p > 1");
  const double M = require_nonzero(u);
  const double q = 2.0 * p / (p - 1.0);
  const double T = scaled_power_sum(u, M, q);
  RecoveredPotential r = blank(u);
  const double lead = std::pow(T, -1.0 / p);
  for (std::size_t i = 0; i < u.size(); ++i) r.V[i] = lead * std::pow(std::abs(u[i]) / M, 2.0 / (p - 1.0));
  finish(r);
  return r;
}

RecoveredPotential recover_l1(const Field& u, const Field& f, double kappa) {
  require_same_grid(u, f);
  const Grid& g = u.grid();
  const double M = norm_inf(u);
  if (!(M > 0.0)) throw Error(ErrorCode::DegenerateContactSet, "u vanishes, no contact set");
  if (kappa <= 0.0) kappa = contact_threshold(g, M);
  RecoveredPotential r = blank(u);
  r.M = M;
  const double tol = 1e-12 * norm_inf(f);
  std::ostringstream bad;
  for (std::size_t i = g.first_free(); i < g.last_free(); ++i) {
    if (u[i] >= M - kappa) {
      r.omega_plus.push_back(i);
      if (f[i] < -tol) bad << " " << i;
      r.V[i] = f[i] / M;
    } else if (-u[i] >= M - kappa) {
      r.omega_minus.push_back(i);
      if (f[i] > tol) bad << " " << i;
      r.V[i] = -f[i] / M;
    }
  }
  if (r.omega_plus.empty() && r.omega_minus.empty())
    throw Error(ErrorCode::DegenerateContactSet, "both contact sets are empty");
  if (!bad.str().empty()) throw Error(ErrorCode::SignViolation, "f has the wrong sign at nodes" + bad.str());
  finish(r);
  return r;
}

RecoveredPotential recover_l1(const SupNormResult& solution, const Field& f) {
  require_same_grid(solution.u, f);
  const Grid& g = f.grid();
  RecoveredPotential r = blank(f);
  r.M = solution.M;
  r.omega_plus = solution.omega_plus;
  r.omega_minus = solution.omega_minus;
  if (solution.degenerate || !(solution.M > 0.0)) return r;
  const double tol = 1e-12 * norm_inf(f);
  std::ostringstream bad;
  for (std::size_t i : solution.omega_plus) {
    if (f[i] < -tol) bad << " " << i;
    r.V[i] = std::max(0.0, solution.contact_force[i]) / (g.weight(i) * solution.M);
  }
  for (std::size_t i : solution.omega_minus) {
    if (f[i] > tol) bad << " " << i;
    r.V[i] = std::max(0.0, -solution.contact_force[i]) / (g.weight(i) * solution.M);
  }
  if (!bad.str().empty()) throw Error(ErrorCode::SignViolation, "f has the wrong sign at nodes" + bad.str());
  finish(r);
  return r;
}

RecoveredPotential recover_inverse_lp(const Field& u, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "recover_inverse_lp requires p > 0");
  const double M = require_nonzero(u);
  const double s = 2.0 * p / (p + 1.0);
  const double T = scaled_power_sum(u, M, s);
  RecoveredPotential r = blank(u);
  const double lead = std::pow(T, 1.0 / p);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) {
      r.finite[i] = false;
      continue;
    }
    r.V[i] = lead * std::pow(std::abs(u[i]) / M, -2.0 / (p + 1.0));
  }
  r.multiplier = multiplier_closed_form(ConstraintSpec::inverse_lp(p), u);
  finish(r);
  return r;
}

RecoveredPotential recover_exponential(const Field& u, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "recover_exponential requires alpha > 0");
  require_nonzero(u);
  const double logS = std::log(inner(u, u));
  RecoveredPotential r = blank(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) {
      r.finite[i] = false;
      continue;
    }
    r.V[i] = (logS - std::log(u[i] * u[i])) / alpha;
  }
  r.multiplier = multiplier_closed_form(ConstraintSpec::exponential(alpha), u);
  finish(r);
  return r;
}

double multiplier_closed_form(const ConstraintSpec& psi, const Field& u) {
  require_decreasing(psi);
  const double M = require_nonzero(u);
  if (psi.family == ConstraintSpec::Family::Exponential) return -psi.alpha / inner(u, u);
  // -p (integral |u|^r)^{-(p+1)/p}, integral |u|^r = M^r T
  const double r = 2.0 * psi.p / (psi.p + 1.0);
  const double logI = r * std::log(M) + std::log(scaled_power_sum(u, M, r));
  return -psi.p * std::exp(-(psi.p + 1.0) / psi.p * logI);
}

double multiplier_root(const ConstraintSpec& psi, const Field& u) {
  require_decreasing(psi);
  require_nonzero(u);
  const double d0 = normalization_defect(psi, u, 0.0);
  if (d0 == 0.0) return -1.0;
  // expand away from L = 0 in the direction that changes the sign
  const double dir = d0 < 0.0 ? 1.0 : -1.0;
  double previous = 0.0, step = 1.0;
  bool bracketed = false;
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < 12; ++k, step *= 2.0) {
    const double L = dir * step;
    const double d = normalization_defect(psi, u, L);
    if (std::isnan(d)) break;
    if ((d < 0.0) != (d0 < 0.0)) {
      lo = std::min(previous, L);
      hi = std::max(previous, L);
      bracketed = true;
      break;
    }
    previous = L;
  }
  if (!bracketed) throw Error(ErrorCode::BracketingFailure, "normalization has no sign change");
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (normalization_defect(psi, u, mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return -std::exp(0.5 * (lo + hi));
}

RecoveredPotential potential_from_multiplier(const ConstraintSpec& psi, const Field& u, double multiplier) {
  require_decreasing(psi);
  if (!(multiplier < 0.0)) throw Error(ErrorCode::InvalidArgument, "multiplier must be negative");
  RecoveredPotential r = blank(u);
  r.multiplier = multiplier;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) {
      r.finite[i] = false;
      continue;
    }
    const double y = -multiplier * u[i] * u[i];
    if (psi.family == ConstraintSpec::Family::InverseLp)
      r.V[i] = std::pow(y / psi.p, -1.0 / (psi.p + 1.0));
    else
      r.V[i] = -std::log(y / psi.alpha) / psi.alpha;
  }
  finish(r);
  return r;
}

double constraint_integral(const ConstraintSpec& psi, const RecoveredPotential& V) {
  const auto w = V.V.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < V.V.size(); ++i) {
    if (!V.finite[i]) continue;
    sum += w[i] * psi_of(psi, V.V[i]);
  }
  return sum;
}

}  // namespace potopt
