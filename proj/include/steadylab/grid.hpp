#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace steadylab {

// Uniform periodic grid on [0, L) with N nodes.
class Grid {
 public:
  Grid(double length, std::size_t points);

  double length() const { return length_; }
  std::size_t size() const { return points_; }
  double spacing() const { return length_ / static_cast<double>(points_); }
  double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }
  // Angular wavenumber of rfft bin k (0 <= k <= N/2).
  double wavenumber(std::size_t k) const;
  std::size_t num_modes() const { return points_ / 2 + 1; }

  bool operator==(const Grid& o) const {
    return length_ == o.length_ && points_ == o.points_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  double length_;
  std::size_t points_;
};

class Field {
 public:
  Field(const Grid& grid, std::vector<double> values, double time = 0.0);
  static Field zeros(const Grid& grid, double time = 0.0);
  static Field sample(const Grid& grid, const std::function<double(double)>& fn,
                      double time = 0.0);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
  double time_;
};

// Discrete L2 norm sqrt(h * sum v^2).
double l2_norm(const Field& f);
double max_abs(const Field& f);
double max_abs_diff(const Field& a, const Field& b);
double l2_diff(const Field& a, const Field& b);
// Sample variance of the nodal values.
double variance(const Field& f);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

}  // namespace steadylab
