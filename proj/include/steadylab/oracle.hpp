#pragma once

#include <functional>
#include <vector>

#include "steadylab/grid.hpp"
#include "steadylab/params.hpp"
#include "steadylab/trajectory.hpp"

// Finite-difference and brute-force checks. Nothing in here goes through
// the FFT path, so it can referee the spectral code.
namespace steadylab::oracle {

// Periodic centered difference of the given derivative order; accuracy 6 or 8.
std::vector<double> fd_derivative(const std::vector<double>& v, double h, int order,
                                  int accuracy = 8);
std::vector<double> fd_derivative(const Field& v, int order, int accuracy = 8);

// a v_x + b v^m v_x + kappa v_xxx - mu v_xxxxx
std::vector<double> fd_flux_divergence(const Field& v, const GRKRLWParams& p, int accuracy = 8);
// Right-hand side R(v) of the perturbed equation.
std::vector<double> fd_perturbation(const Field& v, const PerturbedParams& p, int accuracy = 8);
// Rectangle-rule mass and energy with FD derivatives.
double fd_mass(const Field& v);
double fd_energy(const Field& v, const GRKRLWParams& p, int accuracy = 8);

// Max |PDE residual| over interior snapshots, FD in x (accuracy_x) and a
// 4th-order centered stencil in t. Needs >= 5 uniformly spaced snapshots.
double fd_pde_residual(const Trajectory& traj, const GRKRLWParams& p, int accuracy_x = 8);
double fd_pde_residual(const Trajectory& traj, const PerturbedParams& p, int accuracy_x = 8);
// Dispatches on the parameters stored in the trajectory.
double fd_pde_residual(const Trajectory& traj, int accuracy_x = 8);

struct AxisScan {
  double best_axis = 0.0;
  double defect = 0.0;
};

// Scans `resolution` evenly spaced axes in [0, L/2); no refinement.
// Reflected values come from 12-point periodic Lagrange interpolation.
AxisScan brute_axis_scan(const Field& f, int resolution);
// Same scan for an analytic periodic profile, defect from `samples` points
// per period.
AxisScan brute_axis_scan(const std::function<double(double)>& f, double period, int resolution,
                         int samples = 1024);

}  // namespace steadylab::oracle
