#include "steadylab/rkrlw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pseudo.hpp"
#include "steadylab/errors.hpp"

namespace steadylab {

double dispersion(const GRKRLWParams& p, double xi) {
  const double x2 = xi * xi;
  return (p.a * xi - p.kappa * x2 * xi - p.mu * x2 * x2 * xi) / p.symbol().symbol(xi);
}

bool uses_integrating_factor(const GRKRLWParams& p) {
  int num = 0;
  if (p.a != 0.0) num = 1;
  if (p.kappa != 0.0) num = 3;
  if (p.mu != 0.0) num = 5;
  int den = 0;
  if (p.alpha != 0.0) den = 2;
  if (p.beta != 0.0) den = 4;
  return num - den >= 2;
}

namespace {

// -(b/(m+1)) d/dx (w^{m+1}) / symbol, with w the truncated state.
void rkrlw_nonlinear(const Grid& grid, const GRKRLWParams& p, double frac, const Spectrum& v,
                     Spectrum& out) {
  Spectrum w(v);
  dealias_spectrum(w, grid.size(), frac);
  const std::vector<double> wx = inverse_values(grid, w);
  Spectrum q = detail::truncated_forward(grid, detail::power(wx, p.m + 1), frac);
  detail::ddx(grid, q);
  const double coef = p.b / static_cast<double>(p.m + 1);
  out.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = -(coef * q[k]) / p.symbol().symbol(grid.wavenumber(k));
  }
}

}  // namespace

Field flux(const Field& v, const GRKRLWParams& p) {
  p.validate();
  const Grid& grid = v.grid();
  Spectrum s = forward(v);
  Spectrum lin(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double xi = grid.wavenumber(k);
    const double x2 = xi * xi;
    // a (i xi) + kappa (i xi)^3 - mu (i xi)^5 = i (a xi - kappa xi^3 - mu xi^5)
    lin[k] = std::complex<double>(0.0, p.a * xi - p.kappa * x2 * xi - p.mu * x2 * x2 * xi) * s[k];
  }
  lin.back() = 0.0;
  if (p.b != 0.0) {
    const double frac = dealias_fraction_for_degree(nonlinear_degree(p));
    Spectrum w(s);
    dealias_spectrum(w, grid.size(), frac);
    Spectrum q = detail::truncated_forward(grid, detail::power(inverse_values(grid, w), p.m + 1),
                                           frac);
    detail::ddx(grid, q);
    const double coef = p.b / static_cast<double>(p.m + 1);
    for (std::size_t k = 0; k < s.size(); ++k) lin[k] += coef * q[k];
  }
  return inverse(grid, lin, v.time());
}

Field rkrlw_rhs(const Field& v, const GRKRLWParams& p) {
  return -1.0 * apply_k(flux(v, p), p.symbol());
}

SemiLinearProblem rkrlw_problem(const Grid& grid, const GRKRLWParams& p) {
  p.validate();
  SemiLinearProblem prob{grid, Spectrum(grid.num_modes()), {}, uses_integrating_factor(p)};
  for (std::size_t k = 0; k < grid.num_modes(); ++k) {
    prob.linear[k] = std::complex<double>(0.0, -dispersion(p, grid.wavenumber(k)));
  }
  prob.linear.back() = 0.0;
  if (p.b != 0.0) {
    const double frac = dealias_fraction_for_degree(nonlinear_degree(p));
    prob.nonlinear = [grid, p, frac](const Spectrum& in, Spectrum& out) {
      rkrlw_nonlinear(grid, p, frac, in, out);
    };
  }
  return prob;
}

Field step(const Field& v, const GRKRLWParams& p, double dt) {
  Rk4Stepper stepper(rkrlw_problem(v.grid(), p), dt);
  Spectrum s = forward(v);
  stepper.step(s, v.time());
  return inverse(v.grid(), s, v.time() + dt);
}

Trajectory simulate(const Field& v0, const GRKRLWParams& p, double t_end, double dt,
                    int snapshot_every) {
  return detail::run(v0, rkrlw_problem(v0.grid(), p), p, t_end, dt, snapshot_every);
}

double mass(const Field& v) {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s * v.grid().spacing();
}

double energy(const Field& v, const GRKRLWParams& p) {
  const Spectrum s = forward(v);
  const auto d = detail::derivatives(v.grid(), s, 2);
  double e = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    e += d[0][j] * d[0][j] + p.alpha * d[1][j] * d[1][j] + p.beta * d[2][j] * d[2][j];
  }
  return e * v.grid().spacing();
}

double suggest_dt(const GRKRLWParams& p, const Grid& grid, double amplitude) {
  p.validate();
  const bool ifac = uses_integrating_factor(p);
  double lin = 0.0, nl = 0.0;
  const double amp_m = std::pow(std::abs(amplitude), p.m);
  for (std::size_t k = 0; k < grid.num_modes(); ++k) {
    const double xi = grid.wavenumber(k);
    if (!ifac) lin = std::max(lin, std::abs(dispersion(p, xi)));
    nl = std::max(nl, std::abs(xi) * std::abs(p.b) * amp_m / p.symbol().symbol(xi));
  }
  const double rate = std::max(lin, nl);
  if (rate == 0.0) return 1.0;
  return std::min(1.0, 0.5 / rate);
}

}  // namespace steadylab
