#pragma once

#include <utility>

#include "steadylab/grid.hpp"
#include "steadylab/integrator.hpp"
#include "steadylab/params.hpp"
#include "steadylab/trajectory.hpp"

namespace steadylab {

// All twelve terms of the perturbation R(v).
Field perturbation_R(const Field& v, const PerturbedParams& p);
// M^{-1} [R - a1 v_x - a2 v_xxx - a5 (v^n)_x]
Field perturbed_rhs(const Field& v, const PerturbedParams& p);

// Linear Fourier symbol of the rearranged equation.
std::complex<double> perturbed_linear_symbol(const PerturbedParams& p, double xi);
bool uses_integrating_factor(const PerturbedParams& p);
SemiLinearProblem perturbed_problem(const Grid& grid, const PerturbedParams& p);

Field step_perturbed(const Field& v, const PerturbedParams& p, double dt);
Trajectory simulate_perturbed(const Field& v0, const PerturbedParams& p, double t_end,
                              double dt, int snapshot_every);
double suggest_dt_perturbed(const PerturbedParams& p, const Grid& grid, double amplitude = 1.0);

struct SpeedEstimate {
  double speed = 0.0;
  double shape_defect = 0.0;
};
SpeedEstimate measure_speed(const Trajectory& traj);

// Shift s (in (-L/2, L/2]) maximizing the correlation of b with a(x - s).
double best_shift(const Field& a, const Field& b);

}  // namespace steadylab
