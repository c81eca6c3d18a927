#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "steadylab/grid.hpp"
#include "steadylab/params.hpp"
#include "steadylab/trajectory.hpp"

namespace steadylab {

// phi(t,x) = rho((t-ct)/rt) rho((x-cx)/rx), rho(s) = exp(-1/(1-s^2)) on |s|<1.
struct TestBump {
  double center_t = 0.0;
  double center_x = 0.0;
  double radius_t = 1.0;
  double radius_x = 1.0;
};

struct Bump1D {
  double center = 0.0;
  double radius = 1.0;
};

// rho and its derivatives 0..max_order at s (zero outside (-1,1)).
std::vector<double> bump_derivatives(double s, int max_order);

// Spatial integrals run on the spectral interpolant refined until every
// bump radius spans this many points; rho^(5) needs about that many.
inline constexpr double kPointsPerRadius = 800.0;

struct WeakReport {
  double max_residual = 0.0;
  std::vector<double> per_bump;
};

WeakReport weak_residual_report(const Trajectory& traj, const GRKRLWParams& p,
                                const std::vector<TestBump>& bumps);
double weak_residual(const Trajectory& traj, const GRKRLWParams& p,
                     const std::vector<TestBump>& bumps);

struct CertificateReport {
  double max_residual = 0.0;
  std::vector<double> per_bump;
  double plus_one_contribution = 0.0;  // max |integral of psi_x| over bumps
};

CertificateReport steady_certificate(const Field& V, double c, const GRKRLWParams& p,
                                     const std::vector<Bump1D>& bumps);

// Random bumps strictly inside [t0,t1] x (0,L). Radii are at least
// `min_cells` grid cells and `min_steps` snapshot intervals (capped at 0.45 of
// the box). Simpson in t needs roughly 200 intervals per radius for 1e-10.
std::vector<TestBump> random_bumps(const Trajectory& traj, std::size_t count, std::uint64_t seed,
                                   double min_cells = 24.0, double min_steps = 200.0);
std::vector<Bump1D> random_bumps_1d(const Grid& grid, std::size_t count, std::uint64_t seed,
                                    double min_cells = 24.0);

nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const WeakReport& r);

}  // namespace steadylab
