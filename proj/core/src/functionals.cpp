#include "potopt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "potopt/error.hpp"
#include "potopt/operators.hpp"

namespace potopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

// Phi, the potential V with 1/2 grad Phi = W V u, and the pieces of 1/2 Hess Phi.
struct ConstraintTerm {
  double phi = 0.0;
  std::vector<double> V;
  std::vector<double> hdiag;
  std::vector<double> hvec;
  double hcoeff = 0.0;
};

// Phi(u) = (sum_i w_i rho_i^{s/2})^{2/s}, rho = u^2 + eps^2, evaluated with
// rho scaled by its maximum so that large or tiny exponents stay finite.
ConstraintTerm power_sum_term(const Field& u, double s, double eps) {
  const Grid& g = u.grid();
  const auto w = g.weights();
  const std::size_t n = u.size();
  ConstraintTerm t;
  t.V.assign(n, 0.0);
  t.hdiag.assign(n, 0.0);
  t.hvec.assign(n, 0.0);
  std::vector<double> rho(n);
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = u[i] * u[i] + eps * eps;
    top = std::max(top, rho[i]);
  }
  if (top == 0.0) return t;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += w[i] * std::pow(rho[i] / top, 0.5 * s);
  t.phi = top * std::pow(sum, 2.0 / s);
  const double lead = std::pow(sum, 2.0 / s - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i] == 0.0) {
      t.V[i] = s < 2.0 ? kInf : (s == 2.0 ? lead : 0.0);
      continue;
    }
    const double V = lead * std::pow(rho[i] / top, 0.5 * s - 1.0);
    t.V[i] = V;
    t.hdiag[i] = std::max(0.0, w[i] * V * (1.0 + (s - 2.0) * u[i] * u[i] / rho[i]));
    t.hvec[i] = w[i] * V * u[i];
  }
  t.hcoeff = (2.0 - s) / t.phi;
  return t;
}

// Phi(u) = (S log S - sum w rho log rho) / alpha with S = sum w rho.
ConstraintTerm exponential_term(const Field& u, double alpha, double eps) {
  const Grid& g = u.grid();
  const auto w = g.weights();
  const std::size_t n = u.size();
  ConstraintTerm t;
  t.V.assign(n, 0.0);
  t.hdiag.assign(n, 0.0);
  t.hvec.assign(n, 0.0);
  double S = 0.0, entropy = 0.0;
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = u[i] * u[i] + eps * eps;
    S += w[i] * rho[i];
    if (rho[i] > 0.0) entropy += w[i] * rho[i] * std::log(rho[i]);
  }
  if (S == 0.0) return t;
  const double logS = std::log(S);
  t.phi = (S * logS - entropy) / alpha;
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i] == 0.0) {
      t.V[i] = kInf;
      continue;
    }
    t.V[i] = (logS - std::log(rho[i])) / alpha;
    t.hdiag[i] = std::max(0.0, w[i] * (t.V[i] - 2.0 / alpha * u[i] * u[i] / rho[i]));
    t.hvec[i] = w[i] * u[i];
  }
  t.hcoeff = 2.0 / (alpha * S);
  return t;
}

ConstraintTerm quadratic_term(const Field& u, const Field& V) {
  const auto w = u.grid().weights();
  ConstraintTerm t;
  t.V.assign(V.values().begin(), V.values().end());
  t.hdiag.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    t.phi += w[i] * V[i] * u[i] * u[i];
    t.hdiag[i] = w[i] * V[i];
  }
  return t;
}

void check_kind(const FunctionalKind& kind, const Field& u) {
  if (kind.f) require_same_grid(*kind.f, u);
  if (kind.potential) require_same_grid(*kind.potential, u);
}

ConstraintTerm constraint_term(const FunctionalKind& kind, const Field& u) {
  switch (kind.tag) {
    case FunctionalTag::Jp:
      return power_sum_term(u, 2.0 * kind.p / (kind.p - 1.0), 0.0);
    case FunctionalTag::JInvP:
    case FunctionalTag::Lambda1InvP:
      return power_sum_term(u, 2.0 * kind.p / (kind.p + 1.0), kind.epsilon);
    case FunctionalTag::Lambda1Exp:
    case FunctionalTag::EnergyExp:
      return exponential_term(u, kind.alpha, kind.epsilon);
    case FunctionalTag::Quadratic:
      return quadratic_term(u, *kind.potential);
    case FunctionalTag::J1: {
      ConstraintTerm t;
      const double m = norm_inf(u);
      t.phi = m * m;
      return t;
    }
  }
  return {};
}

double source_term(const FunctionalKind& kind, const Field& u) { return kind.f ? inner(*kind.f, u) : 0.0; }

}  // namespace

ConstraintSpec ConstraintSpec::lp(double p) {
  require_positive(p, "exponent p");
  return {Family::Lp, p, 0.0};
}

ConstraintSpec ConstraintSpec::inverse_lp(double p) {
  require_positive(p, "exponent p");
  return {Family::InverseLp, p, 0.0};
}

ConstraintSpec ConstraintSpec::exponential(double alpha) {
  require_positive(alpha, "alpha");
  return {Family::Exponential, 0.0, alpha};
}

namespace {
void require_smoothing(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidArgument, "smoothing epsilon must be finite and nonnegative");
}
}  // namespace

FunctionalKind FunctionalKind::jp(double p, Field f) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "Jp requires p > 1");
  FunctionalKind k;
  k.tag = FunctionalTag::Jp;
  k.p = p;
  k.f = std::move(f);
  return k;
}

FunctionalKind FunctionalKind::j1(Field f) {
  FunctionalKind k;
  k.tag = FunctionalTag::J1;
  k.p = 1.0;
  k.f = std::move(f);
  return k;
}

FunctionalKind FunctionalKind::jinvp(double p, Field f, double epsilon) {
  require_positive(p, "exponent p");
  FunctionalKind k;
  k.tag = FunctionalTag::JInvP;
  k.p = p;
  k.f = std::move(f);
  require_smoothing(epsilon);
  k.epsilon = epsilon;
  return k;
}

FunctionalKind FunctionalKind::lambda1_invp(double p, double epsilon) {
  require_positive(p, "exponent p");
  FunctionalKind k;
  k.tag = FunctionalTag::Lambda1InvP;
  k.p = p;
  require_smoothing(epsilon);
  k.epsilon = epsilon;
  return k;
}

FunctionalKind FunctionalKind::lambda1_exp(double alpha, double epsilon) {
  require_positive(alpha, "alpha");
  FunctionalKind k;
  k.tag = FunctionalTag::Lambda1Exp;
  k.alpha = alpha;
  require_smoothing(epsilon);
  k.epsilon = epsilon;
  return k;
}

FunctionalKind FunctionalKind::energy_exp(double alpha, Field f, double epsilon) {
  require_positive(alpha, "alpha");
  FunctionalKind k;
  k.tag = FunctionalTag::EnergyExp;
  k.alpha = alpha;
  k.f = std::move(f);
  require_smoothing(epsilon);
  k.epsilon = epsilon;
  return k;
}

FunctionalKind FunctionalKind::quadratic(Field V, Field f) {
  require_same_grid(V, f);
  FunctionalKind k;
  k.tag = FunctionalTag::Quadratic;
  k.potential = std::move(V);
  k.f = std::move(f);
  return k;
}

double eval(const FunctionalKind& kind, const Field& u) {
  check_kind(kind, u);
  const ConstraintTerm t = constraint_term(kind, u);
  return kind.scale() * (0.5 * dirichlet_form(u, u) + 0.5 * kind.weight * t.phi - source_term(kind, u));
}

Field gradient(const FunctionalKind& kind, const Field& u) {
  check_kind(kind, u);
  const Grid& g = u.grid();
  Field out = stiffness_action(u);
  const double s = kind.scale();
  if (kind.tag == FunctionalTag::J1) {
    std::size_t top = g.first_free();
    for (std::size_t i = g.first_free(); i < g.last_free(); ++i)
      if (std::abs(u[i]) > std::abs(u[top])) top = i;
    for (std::size_t i = g.first_free(); i < g.last_free(); ++i) {
      double v = out[i] / g.weight(i);
      if (i == top && u[i] != 0.0) v += kind.weight * u[i] / g.weight(i);
      if (kind.f) v -= (*kind.f)[i];
      out[i] = s * v;
    }
    return out;
  }
  const ConstraintTerm t = constraint_term(kind, u);
  for (std::size_t i = g.first_free(); i < g.last_free(); ++i) {
    const double vu = u[i] == 0.0 ? 0.0 : t.V[i] * u[i];
    double v = out[i] / g.weight(i) + kind.weight * vu;
    if (kind.f) v -= (*kind.f)[i];
    out[i] = s * v;
  }
  return out;
}

Field constraint_potential(const FunctionalKind& kind, const Field& u) {
  check_kind(kind, u);
  if (kind.tag == FunctionalTag::J1) throw Error(ErrorCode::InvalidArgument, "J1 has no pointwise potential");
  ConstraintTerm t = constraint_term(kind, u);
  for (double& v : t.V) v *= kind.weight;
  return Field(u.grid(), std::move(t.V));
}

HessianModel hessian_model(const FunctionalKind& kind, const Field& u) {
  check_kind(kind, u);
  if (kind.tag == FunctionalTag::J1) throw Error(ErrorCode::InvalidArgument, "J1 is not twice differentiable");
  ConstraintTerm t = constraint_term(kind, u);
  HessianModel h;
  h.scale = kind.scale();
  h.diag = std::move(t.hdiag);
  for (double& v : h.diag) v *= kind.weight;
  h.vec = std::move(t.hvec);
  h.coeff = kind.weight * t.hcoeff;
  return h;
}

bool check_admissible_q(double p, int d, double q) {
  if (!(p > 0.0) || d < 1 || !(q >= 1.0)) return false;
  constexpr double slack = 1e-12;
  const double upper = p > 1.0 ? 2.0 * p / (p - 1.0) : kInf;
  if (q > upper * (1.0 + slack)) return false;
  if (d >= 3) return q >= 2.0 * d / (d + 2.0) * (1.0 - slack);
  if (d == 2) return q > 1.0;
  return true;
}

}  // namespace potopt
