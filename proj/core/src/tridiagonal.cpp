#include "potopt/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "potopt/error.hpp"

namespace potopt {

std::vector<double> Tridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += sub[i] * x[i - 1];
    if (i + 1 < n) s += super[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> solve_positive(const Tridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  std::vector<double> c(n), x(rhs.begin(), rhs.end());
  double pivot = a.diag[0];
  if (!(pivot > 0.0)) throw Error(ErrorCode::SingularSystem, "non-positive pivot at row 0");
  c[0] = n > 1 ? a.super[0] / pivot : 0.0;
  x[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.sub[i] * c[i - 1];
    if (!(pivot > 0.0)) throw Error(ErrorCode::SingularSystem, "non-positive pivot in tridiagonal solve");
    c[i] = (i + 1 < n) ? a.super[i] / pivot : 0.0;
    x[i] = (x[i] - a.sub[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

TridiagonalLU::TridiagonalLU(const Tridiagonal& a) {
  const std::size_t n = a.size();
  d_ = a.diag;
  dl_.assign(n > 0 ? n - 1 : 0, 0.0);
  du_.assign(n > 0 ? n - 1 : 0, 0.0);
  du2_.assign(n > 1 ? n - 2 : 0, 0.0);
  pivot_.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dl_[i] = a.sub[i + 1];
    du_[i] = a.super[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      pivot_[i] = i;
      if (d_[i] != 0.0) {
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      pivot_[i] = i + 1;
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
    }
  }
  if (n > 0) pivot_[n - 1] = n - 1;
  double largest = 0.0, smallest = INFINITY;
  for (double v : d_) {
    largest = std::max(largest, std::abs(v));
    smallest = std::min(smallest, std::abs(v));
  }
  pivot_ratio_ = largest > 0.0 ? smallest / largest : 0.0;
}

std::vector<double> TridiagonalLU::solve(std::span<const double> rhs) const {
  const std::size_t n = d_.size();
  std::vector<double> b(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (pivot_[i] == i) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  if (n == 0) return b;
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;)
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  return b;
}

}  // namespace potopt
