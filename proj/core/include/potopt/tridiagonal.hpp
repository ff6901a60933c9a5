#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace potopt {

/// Square tridiagonal matrix. Row i holds sub[i] (column i-1, unused for
/// i = 0), diag[i] and super[i] (column i+1, unused for the last row).
struct Tridiagonal {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  explicit Tridiagonal(std::size_t n = 0) : sub(n, 0.0), diag(n, 0.0), super(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }

  std::vector<double> multiply(std::span<const double> x) const;
};

/// Thomas algorithm for matrices whose elimination pivots stay positive
/// (symmetric positive definite or diagonally dominant systems).
/// Throws SingularSystem when a pivot is not positive.
std::vector<double> solve_positive(const Tridiagonal& a, std::span<const double> rhs);

/// LU factorization with partial pivoting, for shifted (indefinite) systems.
class TridiagonalLU {
 public:
  explicit TridiagonalLU(const Tridiagonal& a);
  std::vector<double> solve(std::span<const double> rhs) const;
  /// Smallest |pivot| relative to the largest; 0 means exactly singular.
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<std::size_t> pivot_;
  double pivot_ratio_ = 0.0;
};

}  // namespace potopt
