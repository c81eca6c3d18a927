#pragma once

#include "steadylab/grid.hpp"
#include "steadylab/integrator.hpp"
#include "steadylab/params.hpp"
#include "steadylab/trajectory.hpp"

namespace steadylab {

// a v_x + b v^m v_x + kappa v_xxx - mu v_xxxxx, nonlinear part dealiased.
Field flux(const Field& v, const GRKRLWParams& p);
// -k * flux(v)
Field rkrlw_rhs(const Field& v, const GRKRLWParams& p);

// omega(xi) = (a xi - kappa xi^3 - mu xi^5) / (1 + alpha xi^2 + beta xi^4)
double dispersion(const GRKRLWParams& p, double xi);

bool uses_integrating_factor(const GRKRLWParams& p);
SemiLinearProblem rkrlw_problem(const Grid& grid, const GRKRLWParams& p);

Field step(const Field& v, const GRKRLWParams& p, double dt);
Trajectory simulate(const Field& v0, const GRKRLWParams& p, double t_end, double dt,
                    int snapshot_every);

double mass(const Field& v);
double energy(const Field& v, const GRKRLWParams& p);

// Default stability bound. With an integrating factor the linear part is
// exact, so only the nonlinear transport at the given amplitude limits dt.
double suggest_dt(const GRKRLWParams& p, const Grid& grid, double amplitude = 1.0);

}  // namespace steadylab
