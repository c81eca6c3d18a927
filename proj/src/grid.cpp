#include "steadylab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "steadylab/errors.hpp"

namespace steadylab {

Grid::Grid(double length, std::size_t points) : length_(length), points_(points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("grid length must be positive and finite");
  }
  if (points < 16 || points % 2 != 0) {
    throw InvalidArgument("grid point count must be even and >= 16, got " +
                          std::to_string(points));
  }
}

double Grid::wavenumber(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

Field::Field(const Grid& grid, std::vector<double> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " values but grid has " + std::to_string(grid_.size()) + " nodes");
  }
  if (!all_finite()) throw InvalidArgument("field values must be finite");
}

Field Field::zeros(const Grid& grid, double time) {
  return Field(grid, std::vector<double>(grid.size(), 0.0), time);
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& fn, double time) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
  return Field(grid, std::move(v), time);
}

bool Field::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (double x : f.values()) s += x * x;
  return std::sqrt(s * f.grid().spacing());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

static void require_same_grid(const Field& a, const Field& b) {
  if (a.grid() != b.grid()) throw InvalidArgument("fields live on different grids");
}

double max_abs_diff(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double l2_diff(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s * a.grid().spacing());
}

double variance(const Field& f) {
  double mean = 0.0;
  for (double x : f.values()) mean += x;
  mean /= static_cast<double>(f.size());
  double s = 0.0;
  for (double x : f.values()) s += (x - mean) * (x - mean);
  return s / static_cast<double>(f.size());
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return Field(a.grid(), std::move(v), a.time());
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return Field(a.grid(), std::move(v), a.time());
}

Field operator*(double s, const Field& a) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
  return Field(a.grid(), std::move(v), a.time());
}

}  // namespace steadylab
