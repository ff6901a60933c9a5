#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace potopt {

enum class GridKind { Interval, Radial };

/// Uniform discretization of an interval (a,b) or of a ball B_R in R^d
/// reduced to the radial coordinate r in [0,R].
///
/// Radial quadrature uses dual cells [r_{i-1/2}, r_{i+1/2}] clipped to
/// [0,R], weighted by the surface measure s_d r^{d-1}. For d = 1 the grid
/// stands for the half-line (s_1 = 1, symmetry condition at r = 0); for
/// d >= 2, s_d = 2 pi^{d/2} / Gamma(d/2). The weights telescope to the
/// exact volume s_d R^d / d, and the same cell geometry defines the edge
/// conductances of the stiffness form, so the discrete Laplacian is
/// self-adjoint in the quadrature inner product.
///
/// Grids are immutable and cheap to copy (shared storage).
class Grid {
 public:
  GridKind kind() const noexcept { return data_->kind; }
  std::size_t size() const noexcept { return data_->nodes.size(); }
  double spacing() const noexcept { return data_->h; }
  /// Spatial dimension: 1 for intervals.
  int dimension() const noexcept { return data_->d; }
  double lower() const noexcept { return data_->nodes.front(); }
  double upper() const noexcept { return data_->nodes.back(); }

  double node(std::size_t i) const { return data_->nodes[i]; }
  double weight(std::size_t i) const { return data_->weights[i]; }
  /// Conductance of the edge (i, i+1), i.e. s_d r_{i+1/2}^{d-1} / h.
  double conductance(std::size_t i) const { return data_->conductance[i]; }

  std::span<const double> nodes() const noexcept { return data_->nodes; }
  std::span<const double> weights() const noexcept { return data_->weights; }
  std::span<const double> conductances() const noexcept { return data_->conductance; }

  /// Nodes carrying a homogeneous Dirichlet condition: both ends of an
  /// interval, the outer node r = R of a radial grid.
  bool is_dirichlet(std::size_t i) const noexcept;
  /// Half-open index range [first_free, last_free) of unknowns.
  std::size_t first_free() const noexcept { return kind() == GridKind::Interval ? 1 : 0; }
  std::size_t last_free() const noexcept { return size() - 1; }

  /// Measure of the domain (sum of the quadrature weights).
  double volume() const noexcept { return data_->volume; }

  /// Same kind, bounds, dimension and node count.
  bool same_as(const Grid& other) const noexcept;

 private:
  struct Data {
    GridKind kind;
    int d;
    double h;
    double volume;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> conductance;
  };
  explicit Grid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;

  friend Grid make_interval(double a, double b, std::size_t n);
  friend Grid make_radial(double R, int d, std::size_t n);
};

/// Uniform grid on [a,b] with n nodes; throws InvalidDomain unless a < b, n >= 3.
Grid make_interval(double a, double b, std::size_t n);

/// Radial grid r_i = i R/(n-1) for a ball of radius R in R^d.
Grid make_radial(double R, int d, std::size_t n);

/// Surface measure of the unit sphere used by radial grids (1 for d = 1).
double sphere_surface(int d);

/// Nodal real-valued function on a Grid.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);
  Field(Grid grid, const std::function<double(double)>& g);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  /// Zero the Dirichlet nodes.
  void apply_dirichlet();
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Throws MismatchedGrid unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// Quadrature of g over the domain.
double integrate(const Field& g);
/// Quadrature of a*b.
double inner(const Field& a, const Field& b);
double norm_l2(const Field& g);
double norm_inf(const Field& g);

}  // namespace potopt
