#include "steadylab/perturbed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pseudo.hpp"
#include "steadylab/errors.hpp"

namespace steadylab {
namespace {

int derivative_order_needed(const PerturbedParams& p) {
  int d = 0;
  if (p.b7 != 0.0) d = std::max(d, 1);
  if (p.b3 != 0.0 || p.b6 != 0.0) d = std::max(d, 2);
  if (p.b5 != 0.0 || p.b9 != 0.0) d = std::max(d, 3);
  if (p.b8 != 0.0) d = std::max(d, 4);
  if (p.b12 != 0.0) d = std::max(d, 5);
  return d;
}

// Dealiased nonlinear part of R - a5 (v^n)_x, returned in spectral space.
Spectrum nonlinear_part(const Grid& grid, const PerturbedParams& p, double frac,
                        const Spectrum& v) {
  Spectrum w(v);
  dealias_spectrum(w, grid.size(), frac);
  const int order = derivative_order_needed(p);
  const auto d = detail::derivatives(grid, w, order);
  Spectrum out(v.size(), 0.0);
  if (order > 0) {
    std::vector<double> prod(grid.size(), 0.0);
    for (std::size_t j = 0; j < prod.size(); ++j) {
      const double u = d[0][j];
      double s = 0.0;
      if (p.b3 != 0.0) s += p.b3 * d[1][j] * d[2][j];
      if (p.b5 != 0.0) s += p.b5 * u * d[3][j];
      if (p.b6 != 0.0) s += p.b6 * u * d[1][j] * d[2][j];
      if (p.b7 != 0.0) s += p.b7 * d[1][j] * d[1][j] * d[1][j];
      if (p.b8 != 0.0) s += p.b8 * d[1][j] * d[4][j];
      if (p.b9 != 0.0) s += p.b9 * d[2][j] * d[3][j];
      if (p.b12 != 0.0) s += p.b12 * u * d[5][j];
      prod[j] = s;
    }
    out = detail::truncated_forward(grid, prod, frac);
  }
  if (p.b4 != 0.0) {
    Spectrum q = detail::truncated_forward(grid, detail::power(d[0], p.m + 1), frac);
    detail::ddx(grid, q);
    const double coef = p.b4 / static_cast<double>(p.m + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += coef * q[k];
  }
  if (p.a5 != 0.0) {
    Spectrum q = detail::truncated_forward(grid, detail::power(d[0], p.n), frac);
    detail::ddx(grid, q);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= p.a5 * q[k];
  }
  return out;
}

bool has_nonlinearity(const PerturbedParams& p) { return nonlinear_degree(p) > 1; }

}  // namespace

std::complex<double> perturbed_linear_symbol(const PerturbedParams& p, double xi) {
  const double x2 = xi * xi;
  const double re = p.b1 - p.b2 * x2 + p.b10 * x2 * x2;
  const double im = p.b11 * x2 * x2 * xi - p.a1 * xi + p.a2 * x2 * xi;
  return std::complex<double>(re, im) / p.mass_symbol(xi);
}

bool uses_integrating_factor(const PerturbedParams& p) {
  int num = 0;
  if (p.b1 != 0.0) num = 0;
  if (p.a1 != 0.0) num = 1;
  if (p.b2 != 0.0) num = 2;
  if (p.a2 != 0.0) num = 3;
  if (p.b10 != 0.0) num = 4;
  if (p.b11 != 0.0) num = 5;
  int den = 0;
  if (p.a3 != 0.0) den = 2;
  if (p.a4 != 0.0) den = 4;
  return num - den >= 2;
}

Field perturbation_R(const Field& v, const PerturbedParams& p) {
  p.validate();
  const Grid& grid = v.grid();
  const Spectrum s = forward(v);
  Spectrum out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double xi = grid.wavenumber(k);
    const double x2 = xi * xi;
    out[k] = std::complex<double>(p.b1 - p.b2 * x2 + p.b10 * x2 * x2, p.b11 * x2 * x2 * xi) * s[k];
  }
  out.back() = out.back().real();
  if (has_nonlinearity(p)) {
    PerturbedParams q = p;
    q.a5 = 0.0;  // R only
    const double frac = dealias_fraction_for_degree(nonlinear_degree(p));
    const Spectrum nl = nonlinear_part(grid, q, frac, s);
    for (std::size_t k = 0; k < s.size(); ++k) out[k] += nl[k];
  }
  return inverse(grid, out, v.time());
}

Field perturbed_rhs(const Field& v, const PerturbedParams& p) {
  p.validate_on(v.grid());
  const Grid& grid = v.grid();
  const Spectrum s = forward(v);
  Spectrum out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    out[k] = perturbed_linear_symbol(p, grid.wavenumber(k)) * s[k];
  }
  out.back() = out.back().real();
  if (has_nonlinearity(p)) {
    const double frac = dealias_fraction_for_degree(nonlinear_degree(p));
    const Spectrum nl = nonlinear_part(grid, p, frac, s);
    for (std::size_t k = 0; k < s.size(); ++k) out[k] += nl[k] / p.mass_symbol(grid.wavenumber(k));
  }
  return inverse(grid, out, v.time());
}

SemiLinearProblem perturbed_problem(const Grid& grid, const PerturbedParams& p) {
  p.validate_on(grid);
  SemiLinearProblem prob{grid, Spectrum(grid.num_modes()), {}, uses_integrating_factor(p)};
  for (std::size_t k = 0; k < grid.num_modes(); ++k) {
    prob.linear[k] = perturbed_linear_symbol(p, grid.wavenumber(k));
  }
  prob.linear.back() = prob.linear.back().real();
  if (has_nonlinearity(p)) {
    const double frac = dealias_fraction_for_degree(nonlinear_degree(p));
    prob.nonlinear = [grid, p, frac](const Spectrum& in, Spectrum& out) {
      out = nonlinear_part(grid, p, frac, in);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] /= p.mass_symbol(grid.wavenumber(k));
    };
  }
  return prob;
}

Field step_perturbed(const Field& v, const PerturbedParams& p, double dt) {
  Rk4Stepper stepper(perturbed_problem(v.grid(), p), dt);
  Spectrum s = forward(v);
  stepper.step(s, v.time());
  return inverse(v.grid(), s, v.time() + dt);
}

Trajectory simulate_perturbed(const Field& v0, const PerturbedParams& p, double t_end, double dt,
                              int snapshot_every) {
  return detail::run(v0, perturbed_problem(v0.grid(), p), p, t_end, dt, snapshot_every);
}

double suggest_dt_perturbed(const PerturbedParams& p, const Grid& grid, double amplitude) {
  p.validate_on(grid);
  const bool ifac = uses_integrating_factor(p);
  const double amp = std::abs(amplitude);
  double rate = 0.0;
  for (std::size_t k = 0; k < grid.num_modes(); ++k) {
    const double xi = grid.wavenumber(k);
    const double den = std::abs(p.mass_symbol(xi));
    if (!ifac) rate = std::max(rate, std::abs(perturbed_linear_symbol(p, xi)));
    // Crude bound on the linearized nonlinear terms at the given amplitude.
    const double x = std::abs(xi);
    double nl = std::abs(p.a5) * p.n * std::pow(amp, p.n - 1) * x +
                std::abs(p.b4) * std::pow(amp, p.m) * x +
                (std::abs(p.b3) + std::abs(p.b5) + std::abs(p.b8) + std::abs(p.b9) +
                 std::abs(p.b12)) * amp * (x + x * x + x * x * x + x * x * x * x + std::pow(x, 5)) +
                (std::abs(p.b6) + std::abs(p.b7)) * amp * amp * (x * x + x * x * x);
    rate = std::max(rate, nl / den);
  }
  if (rate == 0.0) return 1.0;
  return std::min(1.0, 0.5 / rate);
}

double best_shift(const Field& a, const Field& b) {
  if (a.grid() != b.grid()) throw InvalidArgument("fields live on different grids");
  const Grid& g = a.grid();
  const Spectrum A = forward(a);
  const Spectrum B = forward(b);
  Spectrum P(A.size());
  for (std::size_t k = 0; k < A.size(); ++k) P[k] = B[k] * std::conj(A[k]);
  P.front() = P.front().real();
  P.back() = P.back().real();
  const std::vector<double> corr = inverse_values(g, P);
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());

  const std::size_t nyq = g.size() / 2;
  auto weight = [&](std::size_t k) { return (k == 0 || k == nyq) ? 1.0 : 2.0; };
  auto d1 = [&](double s) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= nyq; ++k) {
      const double xi = g.wavenumber(k);
      acc -= weight(k) * xi * std::imag(P[k] * std::polar(1.0, xi * s));
    }
    return acc;
  };
  auto d2 = [&](double s) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= nyq; ++k) {
      const double xi = g.wavenumber(k);
      acc -= weight(k) * xi * xi * std::real(P[k] * std::polar(1.0, xi * s));
    }
    return acc;
  };

  const double h = g.spacing();
  double lo = g.node(best) - h, hi = g.node(best) + h;
  double flo = d1(lo), fhi = d1(hi);
  double s = g.node(best);
  if (flo > 0.0 && fhi < 0.0) {
    // Safeguarded Newton on the derivative of the correlation.
    for (int it = 0; it < 100; ++it) {
      const double f = d1(s);
      if (f > 0.0) lo = s; else hi = s;
      const double fp = d2(s);
      double next = (fp != 0.0) ? s - f / fp : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s))) { s = next; break; }
      s = next;
      if (hi - lo < 1e-15 * std::max(1.0, std::abs(s))) break;
    }
  }
  const double L = g.length();
  s = std::fmod(s, L);
  if (s > 0.5 * L) s -= L;
  if (s <= -0.5 * L) s += L;
  return s;
}

SpeedEstimate measure_speed(const Trajectory& traj) {
  if (traj.size() < 2) throw InsufficientData("measure_speed needs at least two snapshots");
  if (variance(traj.front()) < 1e-14) {
    throw DegenerateInput("measure_speed: near-constant field has no trackable shape");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) total += best_shift(traj[i], traj[i + 1]);
  const double elapsed = traj.back().time() - traj.front().time();
  SpeedEstimate out;
  out.speed = total / elapsed;
  const double s = best_shift(traj.front(), traj.back());
  const Field moved = shift(traj.front(), s);
  const double norm = l2_norm(traj.back());
  out.shape_defect = norm > 0.0 ? l2_diff(moved, traj.back()) / norm : l2_norm(moved);
  return out;
}

}  // namespace steadylab
