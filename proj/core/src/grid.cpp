#include "potopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "potopt/error.hpp"

namespace potopt {

double sphere_surface(int d) {
  if (d == 1) return 1.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

Grid make_interval(double a, double b, std::size_t n) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b) || n < 3) {
    std::ostringstream msg;
    msg << "interval (" << a << ", " << b << ") with n = " << n;
    throw Error(ErrorCode::InvalidDomain, msg.str());
  }
  auto data = std::make_shared<Grid::Data>();
  data->kind = GridKind::Interval;
  data->d = 1;
  data->h = (b - a) / static_cast<double>(n - 1);
  data->nodes.resize(n);
  data->weights.assign(n, data->h);
  data->conductance.assign(n - 1, 1.0 / data->h);
  for (std::size_t i = 0; i < n; ++i) data->nodes[i] = a + static_cast<double>(i) * data->h;
  data->nodes.back() = b;
  data->weights.front() = data->weights.back() = 0.5 * data->h;
  data->volume = b - a;
  return Grid(std::move(data));
}

Grid make_radial(double R, int d, std::size_t n) {
  if (!(std::isfinite(R) && R > 0.0) || d < 1 || n < 3) {
    std::ostringstream msg;
    msg << "radial grid R = " << R << ", d = " << d << ", n = " << n;
    throw Error(ErrorCode::InvalidDomain, msg.str());
  }
  auto data = std::make_shared<Grid::Data>();
  data->kind = GridKind::Radial;
  data->d = d;
  const double h = R / static_cast<double>(n - 1);
  data->h = h;
  const double s = sphere_surface(d);
  data->nodes.resize(n);
  data->weights.resize(n);
  data->conductance.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) data->nodes[i] = static_cast<double>(i) * h;
  data->nodes.back() = R;
  // cell faces r_{i+1/2}; the first cell starts at 0, the last ends at R
  auto face = [&](std::size_t i) { return (static_cast<double>(i) + 0.5) * h; };
  double previous = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? std::pow(face(i), d) : std::pow(R, d);
    data->weights[i] = s / d * (next - previous);
    previous = next;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) data->conductance[i] = s * std::pow(face(i), d - 1) / h;
  data->volume = s / d * std::pow(R, d);
  return Grid(std::move(data));
}

bool Grid::is_dirichlet(std::size_t i) const noexcept {
  if (i + 1 == size()) return true;
  return kind() == GridKind::Interval && i == 0;
}

bool Grid::same_as(const Grid& other) const noexcept {
  if (data_ == other.data_) return true;
  return kind() == other.kind() && dimension() == other.dimension() && size() == other.size() &&
         lower() == other.lower() && upper() == other.upper();
}

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::MismatchedGrid, "value count does not match node count");
}

Field::Field(Grid grid, const std::function<double(double)>& g) : grid_(std::move(grid)) {
  values_.resize(grid_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = g(grid_.node(i));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void Field::apply_dirichlet() {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (grid_.is_dirichlet(i)) values_[i] = 0.0;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid())) throw Error(ErrorCode::MismatchedGrid, "fields live on different grids");
}

double integrate(const Field& g) {
  const auto w = g.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += w[i] * g[i];
  return sum;
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a, b);
  const auto w = a.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

double norm_l2(const Field& g) { return std::sqrt(inner(g, g)); }

double norm_inf(const Field& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace potopt
