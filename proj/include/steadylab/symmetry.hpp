#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "steadylab/grid.hpp"
#include "steadylab/trajectory.hpp"

namespace steadylab {

struct AxisResult {
  double axis = 0.0;
  double defect = 0.0;
};

// ||v - reflect(v, axis)|| / ||v||, evaluated mode by mode.
double reflection_defect(const Field& v, double axis);

// Global search; the axis is returned in [0, L/2) because a and a + L/2
// generate the same reflection on a periodic domain.
AxisResult detect_axis(const Field& v);
// Local search in [guess - halfwidth, guess + halfwidth]; axis not wrapped.
AxisResult refine_axis_near(const Field& v, double guess, double halfwidth);

struct SymmetryReport {
  std::vector<std::pair<double, double>> axis_samples;    // (t, axis mod L)
  std::vector<std::pair<double, double>> defect_samples;  // (t, defect)
  std::vector<double> axis_unwrapped;                     // continuous branch
  double axis_speed = 0.0;

  double max_defect() const;
};

SymmetryReport track_axis(const Trajectory& traj);

// Largest deviation of the unwrapped axis from its least-squares line.
double affine_deviation(const SymmetryReport& report);

struct DecompositionResiduals {
  double r_transport = 0.0;
  double r_balance = 0.0;
  std::optional<double> r_linear;
  std::optional<double> r_nonlinear;
};

DecompositionResiduals decomposition_residuals(const Trajectory& traj,
                                               const SymmetryReport& report,
                                               const ModelParams& params);

void write_csv(const SymmetryReport& report, std::ostream& os);
nlohmann::json to_json(const SymmetryReport& report);

}  // namespace steadylab
