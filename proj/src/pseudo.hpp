#pragma once

// Shared helpers for pseudo-spectral nonlinear terms.

#include <vector>

#include "steadylab/spectral.hpp"

namespace steadylab::detail {

// Physical-space derivatives 0..max_order of the band-limited function with
// spectrum `spec`.
std::vector<std::vector<double>> derivatives(const Grid& grid, const Spectrum& spec,
                                             int max_order);

// Pointwise power w^p.
std::vector<double> power(const std::vector<double>& w, int p);

// Forward transform followed by truncation to `fraction`.
Spectrum truncated_forward(const Grid& grid, const std::vector<double>& values, double fraction);

// Multiply spectrum by i*xi in place (Nyquist dropped).
void ddx(const Grid& grid, Spectrum& spec);

}  // namespace steadylab::detail

#include "steadylab/integrator.hpp"
#include "steadylab/trajectory.hpp"

namespace steadylab::detail {

// Fixed-step fold from 0 to t_end; the final step is shortened to land on t_end.
Trajectory run(const Field& v0, const SemiLinearProblem& problem, ModelParams params,
               double t_end, double dt, int snapshot_every);

}  // namespace steadylab::detail
