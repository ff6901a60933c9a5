#include "potopt/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "potopt/error.hpp"

namespace potopt {
namespace {

void require_nonnegative(const Field& V) {
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (!(V[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "V[" << i << "] = " << V[i];
      throw Error(ErrorCode::NegativePotential, msg.str());
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double>& y) {
  const double n = std::sqrt(dot(y, y));
  for (double& v : y) v /= n;
}

void orthogonalize(std::vector<double>& y, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const double c = dot(b, y);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * b[i];
    }
}

double rayleigh(const Tridiagonal& s, const std::vector<double>& y, double& residual) {
  const auto sy = s.multiply(y);
  const double theta = dot(y, sy);
  double r2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = sy[i] - theta * y[i];
    r2 += r * r;
  }
  residual = std::sqrt(r2);
  return theta;
}

// Number of eigenvalues of s strictly below sigma (Sturm sequence).
std::size_t count_below(const Tridiagonal& s, double sigma) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double b2 = i > 0 ? s.sub[i] * s.sub[i] : 0.0;
    q = (s.diag[i] - sigma) - (i > 0 ? b2 / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

void fix_sign(std::vector<double>& y) {
  const double sum = std::accumulate(y.begin(), y.end(), 0.0);
  double largest = 0.0;
  for (double v : y) largest = std::max(largest, std::abs(v));
  double reference = sum;
  if (std::abs(sum) <= 1e-8 * largest * std::sqrt(static_cast<double>(y.size()))) {
    for (double v : y)
      if (std::abs(v) > 1e-6 * largest) {
        reference = v;
        break;
      }
  }
  if (reference < 0.0)
    for (double& v : y) v = -v;
}

}  // namespace

Field clamp_potential(Field V) {
  for (std::size_t i = 0; i < V.size(); ++i) {
    if (std::isnan(V[i]) || V[i] < 0.0) {
      std::ostringstream msg;
      msg << "V[" << i << "] = " << V[i];
      throw Error(ErrorCode::NegativePotential, msg.str());
    }
    V[i] = std::min(V[i], kWallPotential);
  }
  return V;
}

double dirichlet_form(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const auto c = u.grid().conductances();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) sum += c[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
  return sum;
}

Field stiffness_action(const Field& u) {
  const Grid& g = u.grid();
  const auto c = g.conductances();
  const std::size_t n = g.size();
  Field out(g);
  for (std::size_t i = g.first_free(); i < g.last_free(); ++i) {
    double s = 0.0;
    if (i > 0) s += c[i - 1] * (u[i] - u[i - 1]);
    if (i + 1 < n) s += c[i] * (u[i] - u[i + 1]);
    out[i] = s;
  }
  return out;
}

Tridiagonal assemble_operator(const Field& V, double shift) {
  const Grid& g = V.grid();
  const auto c = g.conductances();
  const auto w = g.weights();
  const std::size_t n = g.size();
  const std::size_t first = g.first_free();
  const std::size_t m = g.last_free() - first;
  Tridiagonal a(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = first + j;
    double diag = w[i] * (V[i] - shift);
    if (i > 0) diag += c[i - 1];
    if (i + 1 < n) diag += c[i];
    a.diag[j] = diag;
    if (j > 0) a.sub[j] = -c[i - 1];
    if (j + 1 < m) a.super[j] = -c[i];
  }
  return a;
}

Field apply_operator(const Field& V, const Field& u) {
  require_same_grid(V, u);
  Field out = stiffness_action(u);
  const Grid& g = u.grid();
  for (std::size_t i = g.first_free(); i < g.last_free(); ++i) out[i] = out[i] / g.weight(i) + V[i] * u[i];
  return out;
}

Field solve_linear(const Field& V, const Field& f) {
  require_same_grid(V, f);
  require_nonnegative(V);
  const Grid& g = V.grid();
  const std::size_t first = g.first_free();
  const std::size_t m = g.last_free() - first;
  const Tridiagonal a = assemble_operator(V);
  std::vector<double> rhs(m);
  for (std::size_t j = 0; j < m; ++j) rhs[j] = g.weight(first + j) * f[first + j];
  const auto x = solve_positive(a, rhs);
  Field u(g);
  for (std::size_t j = 0; j < m; ++j) u[first + j] = x[j];
  return u;
}

double energy_of_potential(const Field& V, const Field& f) { return -0.5 * inner(f, solve_linear(V, f)); }

Field torsion(const Field& V) { return solve_linear(V, Field(V.grid(), [](double) { return 1.0; })); }

TridiagonalEigen lowest_eigenpairs(const Tridiagonal& s, std::size_t k, const EigenOptions& options) {
  const std::size_t n = s.size();
  if (k == 0 || k > n) throw Error(ErrorCode::InvalidArgument, "requested eigenpair count out of range");
  TridiagonalEigen out;
  std::mt19937_64 rng(20130611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const TridiagonalLU unshifted(s);
  int budget = options.max_iterations;
  // rounding floors: ||S y - theta y|| cannot drop below eps || |S| |y| ||, and
  // the Sturm count is exact only up to eps times the coupling strength
  const double eps = std::numeric_limits<double>::epsilon();
  double coupling = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    coupling = std::max(coupling, std::abs(s.sub[i]) * (i > 0) + std::abs(s.super[i]) * (i + 1 < n));
  const double sturm_floor = 64.0 * eps * coupling;
  const auto small = [&](const std::vector<double>& y, double residual, double theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::abs(s.diag[i] * y[i]);
      if (i > 0) a += std::abs(s.sub[i] * y[i - 1]);
      if (i + 1 < n) a += std::abs(s.super[i] * y[i + 1]);
      acc += a * a;
    }
    return residual <= options.tolerance * std::abs(theta) + 64.0 * eps * std::sqrt(acc);
  };

  for (std::size_t e = 0; e < k; ++e) {
    bool accepted = false;
    double phase_one_tol = 1e-4;
    for (int attempt = 0; attempt < 3 && !accepted; ++attempt) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = (e == 0 ? 1.0 : 0.0) + unit(rng);
      orthogonalize(y, out.vectors);
      normalize(y);
      double residual = 0.0;
      double theta = rayleigh(s, y, residual);
      bool converged = small(y, residual, theta);

      // inverse iteration with a fixed zero shift until the Rayleigh quotient settles
      for (int it = 0; it < 2000 && !converged; ++it) {
        if (--budget < 0) throw Error(ErrorCode::NoConvergence, "eigen iteration budget exhausted");
        y = unshifted.solve(y);
        orthogonalize(y, out.vectors);
        normalize(y);
        const double previous = theta;
        theta = rayleigh(s, y, residual);
        converged = small(y, residual, theta);
        if (it >= 2 && std::abs(theta - previous) <= phase_one_tol * std::abs(theta)) break;
      }
      // Rayleigh-quotient iteration
      for (int it = 0; it < 200 && !converged; ++it) {
        if (--budget < 0) throw Error(ErrorCode::NoConvergence, "eigen iteration budget exhausted");
        double sigma = theta;
        Tridiagonal shifted = s;
        for (double& d : shifted.diag) d -= sigma;
        TridiagonalLU lu(shifted);
        if (lu.pivot_ratio() == 0.0) {
          sigma *= 1.0 + 1e-13;
          for (double& d : shifted.diag) d = d + theta - sigma;
          lu = TridiagonalLU(shifted);
        }
        y = lu.solve(y);
        orthogonalize(y, out.vectors);
        normalize(y);
        theta = rayleigh(s, y, residual);
        converged = small(y, residual, theta);
      }
      if (!converged) throw Error(ErrorCode::NoConvergence, "eigenpair did not reach the residual tolerance");
      // Sturm check: no eigenvalue other than the accepted ones may lie below theta
      if (count_below(s, theta - 1e-9 * std::abs(theta) - sturm_floor) > e) {
        phase_one_tol *= 1e-3;
        continue;
      }
      fix_sign(y);
      out.values.push_back(theta);
      out.vectors.push_back(std::move(y));
      out.residuals.push_back(residual / std::abs(theta));
      accepted = true;
    }
    if (!accepted) throw Error(ErrorCode::NoConvergence, "inverse iteration skipped an eigenvalue");
  }
  out.iterations = options.max_iterations - budget;
  return out;
}

Spectrum eigenpairs(const Field& V, std::size_t k, const EigenOptions& options) {
  require_nonnegative(V);
  const Grid& g = V.grid();
  const std::size_t first = g.first_free();
  Tridiagonal s = assemble_operator(V);
  const std::size_t m = s.size();
  std::vector<double> root(m);
  for (std::size_t j = 0; j < m; ++j) root[j] = std::sqrt(g.weight(first + j));
  for (std::size_t j = 0; j < m; ++j) {
    s.diag[j] /= root[j] * root[j];
    if (j > 0) s.sub[j] /= root[j] * root[j - 1];
    if (j + 1 < m) s.super[j] /= root[j] * root[j + 1];
  }
  const auto eig = lowest_eigenpairs(s, k, options);
  Spectrum out;
  out.eigenvalues = eig.values;
  out.residuals = eig.residuals;
  out.iterations = eig.iterations;
  for (const auto& y : eig.vectors) {
    Field u(g);
    for (std::size_t j = 0; j < m; ++j) u[first + j] = y[j] / root[j];
    out.eigenfunctions.push_back(std::move(u));
  }
  return out;
}

}  // namespace potopt
