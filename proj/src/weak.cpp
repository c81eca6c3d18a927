#include "steadylab/weak.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <random>

#include "steadylab/errors.hpp"
#include "steadylab/spectral.hpp"

namespace steadylab {
namespace {

using Poly = std::vector<double>;  // coefficients, lowest degree first

double eval(const Poly& p, double s) {
  double r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * s + *it;
  return r;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

// rho^(j) = P_j(s) (1-s^2)^(-2j) rho,  P_{j+1} = u^2 P_j' + (4 j s u - 2 s) P_j.
const std::vector<Poly>& bump_polys() {
  static const std::vector<Poly> polys = [] {
    std::vector<Poly> ps{{1.0}};
    const Poly u{1.0, 0.0, -1.0};
    const Poly u2 = mul(u, u);
    for (int j = 0; j < 8; ++j) {
      const Poly& p = ps.back();
      const Poly lin = add(mul(Poly{0.0, 4.0 * j}, u), Poly{0.0, -2.0});
      ps.push_back(add(mul(u2, derivative(p)), mul(lin, p)));
    }
    return ps;
  }();
  return polys;
}

// Composite Simpson on possibly non-uniform nodes; an odd trailing interval
// uses the quadratic through the last three nodes.
double simpson(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (f[0] + f[1]);
  double s = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = t[i + 1] - t[i], h1 = t[i + 2] - t[i + 1];
    s += (h0 + h1) / 6.0 *
         ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
          (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) {
    // last interval [t[n-2], t[n-1]] from the parabola through n-3, n-2, n-1
    const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
    s += h1 / 6.0 *
         (-(h1 * h1) / (h0 * (h0 + h1)) * f[n - 3] + (3.0 + h1 / h0) * f[n - 2] +
          (2.0 * h1 + 3.0 * h0) / (h0 + h1) * f[n - 1]);
  }
  return s;
}

void check_bump_inside(const TestBump& b, double t0, double t1, double L) {
  if (!(b.radius_t > 0.0) || !(b.radius_x > 0.0)) {
    throw InvalidArgument("bump radii must be positive");
  }
  if (!(b.center_t - b.radius_t >= t0) || !(b.center_t + b.radius_t <= t1) ||
      !(b.center_x - b.radius_x > 0.0) || !(b.center_x + b.radius_x < L)) {
    throw InvalidArgument("test bump support leaves the trajectory's space-time box");
  }
}

// Spatial factor and derivatives 0..5 at the grid nodes inside the support.
struct SpatialFactor {
  std::vector<std::size_t> nodes;
  std::vector<std::array<double, 6>> d;
};

SpatialFactor spatial_factor(const Grid& g, double c, double r) {
  SpatialFactor X;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = (g.node(j) - c) / r;
    if (std::abs(s) >= 1.0) continue;
    const auto d = bump_derivatives(s, 5);
    std::array<double, 6> row{};
    double scale = 1.0;
    for (std::size_t k = 0; k <= 5; ++k) {
      row[k] = d[k] * scale;
      scale /= r;
    }
    X.nodes.push_back(j);
    X.d.push_back(row);
  }
  return X;
}

std::size_t refinement(const Grid& g, double min_radius) {
  const double cells = min_radius / g.spacing();
  return static_cast<std::size_t>(std::clamp(std::ceil(kPointsPerRadius / cells), 1.0, 256.0));
}

}  // namespace

std::vector<double> bump_derivatives(double s, int max_order) {
  if (max_order < 0 || max_order > 8) throw InvalidArgument("bump derivative order out of range");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (std::abs(s) >= 1.0) return out;
  const double u = 1.0 - s * s;
  const double rho = std::exp(-1.0 / u);
  const auto& ps = bump_polys();
  double inv = 1.0;
  for (int j = 0; j <= max_order; ++j) {
    out[static_cast<std::size_t>(j)] = eval(ps[static_cast<std::size_t>(j)], s) * inv * rho;
    inv /= u * u;
  }
  return out;
}

WeakReport weak_residual_report(const Trajectory& traj, const GRKRLWParams& p,
                                const std::vector<TestBump>& bumps) {
  p.validate();
  const auto times = traj.times();
  const double coef = p.b / static_cast<double>(p.m + 1);
  WeakReport rep;
  if (bumps.empty()) return rep;
  double rmin = bumps.front().radius_x;
  for (const auto& b : bumps) {
    check_bump_inside(b, times.front(), times.back(), traj.grid().length());
    rmin = std::min(rmin, b.radius_x);
  }
  const std::size_t factor = refinement(traj.grid(), rmin);
  std::vector<Field> fine;
  fine.reserve(traj.size());
  for (const auto& f : traj.snapshots()) fine.push_back(upsample(f, factor));
  const Grid& g = fine.front().grid();
  const double h = g.spacing();

  for (const auto& b : bumps) {
    const auto X = spatial_factor(g, b.center_x, b.radius_x);
    std::vector<double> integrand(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double s = (times[i] - b.center_t) / b.radius_t;
      if (std::abs(s) >= 1.0) continue;
      const auto T = bump_derivatives(s, 1);
      const double Tt = T[1] / b.radius_t;
      const Field& v = fine[i];
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t q = 0; q < X.nodes.size(); ++q) {
        const double u = v[X.nodes[q]];
        const auto& d = X.d[q];
        s1 += u * (d[0] - p.alpha * d[2] + p.beta * d[4]);
        s2 += (p.a * u + coef * std::pow(u, p.m + 1)) * d[1] + p.kappa * u * d[3] -
              p.mu * u * d[5];
      }
      integrand[i] = (Tt * s1 + T[0] * s2) * h;
    }
    const double val = simpson(times, integrand);
    rep.per_bump.push_back(val);
    rep.max_residual = std::max(rep.max_residual, std::abs(val));
  }
  return rep;
}

double weak_residual(const Trajectory& traj, const GRKRLWParams& p,
                     const std::vector<TestBump>& bumps) {
  return weak_residual_report(traj, p, bumps).max_residual;
}

CertificateReport steady_certificate(const Field& V, double c, const GRKRLWParams& p,
                                     const std::vector<Bump1D>& bumps) {
  p.validate();
  const double coef = p.b / static_cast<double>(p.m + 1);
  CertificateReport rep;
  if (bumps.empty()) return rep;
  double rmin = bumps.front().radius;
  for (const auto& b : bumps) {
    if (!(b.radius > 0.0) || !(b.center - b.radius > 0.0) ||
        !(b.center + b.radius < V.grid().length())) {
      throw InvalidArgument("1-D bump support leaves the domain");
    }
    rmin = std::min(rmin, b.radius);
  }
  const Field fine = upsample(V, refinement(V.grid(), rmin));
  const double h = fine.grid().spacing();
  for (const auto& b : bumps) {
    const auto X = spatial_factor(fine.grid(), b.center, b.radius);
    double total = 0.0, plus_one = 0.0;
    for (std::size_t q = 0; q < X.nodes.size(); ++q) {
      const double u = fine[X.nodes[q]];
      const auto& d = X.d[q];
      const double Lpsi_x = d[1] - p.alpha * d[3] + p.beta * d[5];
      total += -c * u * Lpsi_x + (p.a * u + coef * std::pow(u, p.m + 1) + 1.0) * d[1] +
               p.kappa * u * d[3] - p.mu * u * d[5];
      plus_one += d[1];
    }
    total *= h;
    plus_one *= h;
    rep.per_bump.push_back(total);
    rep.max_residual = std::max(rep.max_residual, std::abs(total));
    rep.plus_one_contribution = std::max(rep.plus_one_contribution, std::abs(plus_one));
  }
  return rep;
}

std::vector<TestBump> random_bumps(const Trajectory& traj, std::size_t count, std::uint64_t seed,
                                   double min_cells, double min_steps) {
  const auto times = traj.times();
  const double t0 = times.front(), t1 = times.back();
  const double T = t1 - t0;
  const double L = traj.grid().length();
  const double dt_snap = times.size() > 1 ? T / static_cast<double>(times.size() - 1) : T;
  const double rt_min = std::min(min_steps * dt_snap, 0.45 * T);
  const double rx_min = std::min(min_cells * traj.grid().spacing(), 0.45 * L);
  if (!(T > 0.0)) throw InvalidArgument("random bumps need a trajectory with positive duration");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TestBump> out;
  for (std::size_t i = 0; i < count; ++i) {
    TestBump b;
    b.radius_t = rt_min + unit(rng) * std::max(0.0, 0.45 * T - rt_min);
    b.radius_x = rx_min + unit(rng) * std::max(0.0, 0.3 * L - rx_min);
    const double tlo = t0 + b.radius_t, thi = t1 - b.radius_t;
    b.center_t = tlo + unit(rng) * (thi - tlo);
    const double xlo = b.radius_x * 1.0001, xhi = L - b.radius_x * 1.0001;
    b.center_x = xlo + unit(rng) * (xhi - xlo);
    out.push_back(b);
  }
  return out;
}

std::vector<Bump1D> random_bumps_1d(const Grid& grid, std::size_t count, std::uint64_t seed,
                                    double min_cells) {
  const double L = grid.length();
  const double r_min = std::min(min_cells * grid.spacing(), 0.45 * L);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Bump1D> out;
  for (std::size_t i = 0; i < count; ++i) {
    Bump1D b;
    b.radius = r_min + unit(rng) * std::max(0.0, 0.3 * L - r_min);
    const double lo = b.radius * 1.0001, hi = L - b.radius * 1.0001;
    b.center = lo + unit(rng) * (hi - lo);
    out.push_back(b);
  }
  return out;
}

nlohmann::json to_json(const CertificateReport& r) {
  return {{"max_residual", r.max_residual},
          {"per_bump", r.per_bump},
          {"plus_one_contribution", r.plus_one_contribution}};
}

nlohmann::json to_json(const WeakReport& r) {
  return {{"max_residual", r.max_residual}, {"per_bump", r.per_bump}};
}

}  // namespace steadylab
