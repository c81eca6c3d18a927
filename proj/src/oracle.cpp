#include "steadylab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "steadylab/errors.hpp"
#include "steadylab/fd_weights.hpp"

namespace steadylab::oracle {
namespace {

std::vector<double> apply_stencil(const std::vector<double>& v, const std::vector<double>& w,
                                  double scale) {
  const long n = static_cast<long>(v.size());
  const long h = static_cast<long>(w.size()) / 2;
  std::vector<double> out(v.size(), 0.0);
  for (long j = 0; j < n; ++j) {
    double s = 0.0;
    for (long k = -h; k <= h; ++k) {
      s += w[static_cast<std::size_t>(k + h)] * v[static_cast<std::size_t>(((j + k) % n + n) % n)];
    }
    out[static_cast<std::size_t>(j)] = s * scale;
  }
  return out;
}

// d^k/dx^k for k = 0..max_order
std::vector<std::vector<double>> all_derivatives(const Field& v, int max_order, int accuracy) {
  std::vector<std::vector<double>> d{v.values()};
  for (int k = 1; k <= max_order; ++k) d.push_back(fd_derivative(v, k, accuracy));
  return d;
}

// 4th-order centered first derivative in time at snapshot i (uniform step).
std::vector<double> time_derivative(const Trajectory& traj, std::size_t i, double dt) {
  static const double w[5] = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
  std::vector<double> out(traj.grid().size(), 0.0);
  for (int k = 0; k < 5; ++k) {
    if (w[k] == 0.0) continue;
    const auto& vals = traj[i + static_cast<std::size_t>(k) - 2].values();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += w[k] * vals[j] / dt;
  }
  return out;
}

double uniform_step(const Trajectory& traj) {
  if (traj.size() < 5) throw InsufficientData("FD residual needs at least 5 snapshots");
  const auto t = traj.times();
  const double dt = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (std::abs((t[i + 1] - t[i]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw InvalidArgument("FD residual needs uniformly spaced snapshot times");
    }
  }
  return dt;
}

template <class Residual>
double max_residual(const Trajectory& traj, Residual&& at) {
  const double dt = uniform_step(traj);
  double r = 0.0;
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const Field vt(traj.grid(), time_derivative(traj, i, dt), traj[i].time());
    const std::vector<double> res = at(traj[i], vt);
    for (double x : res) r = std::max(r, std::abs(x));
  }
  return r;
}

}  // namespace

std::vector<double> fd_derivative(const std::vector<double>& v, double h, int order,
                                  int accuracy) {
  if (accuracy != 6 && accuracy != 8) throw InvalidArgument("FD accuracy must be 6 or 8");
  if (order == 0) return v;
  const std::vector<double> w = central_weights(order, accuracy);
  if (w.size() > v.size()) throw InvalidArgument("grid too coarse for the FD stencil");
  return apply_stencil(v, w, 1.0 / std::pow(h, order));
}

std::vector<double> fd_derivative(const Field& v, int order, int accuracy) {
  return fd_derivative(v.values(), v.grid().spacing(), order, accuracy);
}

std::vector<double> fd_flux_divergence(const Field& v, const GRKRLWParams& p, int accuracy) {
  const auto d = all_derivatives(v, 5, accuracy);
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = p.a * d[1][j] + p.b * std::pow(d[0][j], p.m) * d[1][j] + p.kappa * d[3][j] -
             p.mu * d[5][j];
  }
  return out;
}

std::vector<double> fd_perturbation(const Field& v, const PerturbedParams& p, int accuracy) {
  const auto d = all_derivatives(v, 5, accuracy);
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double u = d[0][j], u1 = d[1][j], u2 = d[2][j], u3 = d[3][j], u4 = d[4][j],
                 u5 = d[5][j];
    out[j] = p.b1 * u + p.b2 * u2 + p.b3 * u1 * u2 + p.b4 * std::pow(u, p.m) * u1 +
             p.b5 * u * u3 + p.b6 * u * u1 * u2 + p.b7 * u1 * u1 * u1 + p.b8 * u1 * u4 +
             p.b9 * u2 * u3 + p.b10 * u4 + p.b11 * u5 + p.b12 * u * u5;
  }
  return out;
}

double fd_mass(const Field& v) {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s * v.grid().spacing();
}

double fd_energy(const Field& v, const GRKRLWParams& p, int accuracy) {
  const auto d1 = fd_derivative(v, 1, accuracy);
  const auto d2 = fd_derivative(v, 2, accuracy);
  double e = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    e += v[j] * v[j] + p.alpha * d1[j] * d1[j] + p.beta * d2[j] * d2[j];
  }
  return e * v.grid().spacing();
}

double fd_pde_residual(const Trajectory& traj, const GRKRLWParams& p, int accuracy_x) {
  return max_residual(traj, [&](const Field& v, const Field& vt) {
    const auto vt2 = fd_derivative(vt, 2, accuracy_x);
    const auto vt4 = fd_derivative(vt, 4, accuracy_x);
    auto r = fd_flux_divergence(v, p, accuracy_x);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += vt[j] - p.alpha * vt2[j] + p.beta * vt4[j];
    return r;
  });
}

double fd_pde_residual(const Trajectory& traj, const PerturbedParams& p, int accuracy_x) {
  return max_residual(traj, [&](const Field& v, const Field& vt) {
    const auto vt2 = fd_derivative(vt, 2, accuracy_x);
    const auto vt4 = fd_derivative(vt, 4, accuracy_x);
    const auto d1 = fd_derivative(v, 1, accuracy_x);
    const auto d3 = fd_derivative(v, 3, accuracy_x);
    const auto R = fd_perturbation(v, p, accuracy_x);
    std::vector<double> r(v.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double u = v[j];
      r[j] = vt[j] + p.a1 * d1[j] + p.a2 * d3[j] + p.a3 * vt2[j] + p.a4 * vt4[j] +
             p.a5 * p.n * std::pow(u, p.n - 1) * d1[j] - R[j];
    }
    return r;
  });
}

double fd_pde_residual(const Trajectory& traj, int accuracy_x) {
  const auto& mp = traj.params();
  if (const auto* g = std::get_if<GRKRLWParams>(&mp)) return fd_pde_residual(traj, *g, accuracy_x);
  if (const auto* q = std::get_if<PerturbedParams>(&mp)) return fd_pde_residual(traj, *q, accuracy_x);
  throw InvalidArgument("trajectory carries no model parameters");
}

AxisScan brute_axis_scan(const Field& f, int resolution) {
  if (resolution < 1000) throw InvalidArgument("brute axis scan needs resolution >= 1000");
  const std::size_t n = f.size();
  const double h = f.grid().spacing();
  const double half = 0.5 * f.grid().length();
  double norm2 = 0.0;
  for (double x : f.values()) norm2 += x * x;
  AxisScan best{0.0, 1e300};
  constexpr int kPts = 12;
  std::vector<double> nodes(kPts);
  for (int r = 0; r < resolution; ++r) {
    const double a = half * r / resolution;
    // 2a - x_j = (s - j) h, with the same fractional part for every j.
    const double s = 2.0 * a / h;
    const double base = std::floor(s);
    const double frac = s - base;
    for (int k = 0; k < kPts; ++k) nodes[static_cast<std::size_t>(k)] = k - (kPts / 2 - 1);
    const std::vector<double> w = fornberg_weights(frac, nodes, 0);
    const long ib = static_cast<long>(base);
    double q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double val = 0.0;
      for (int k = 0; k < kPts; ++k) {
        const long idx = ib - static_cast<long>(j) + k - (kPts / 2 - 1);
        const long m = static_cast<long>(n);
        val += w[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(((idx % m) + m) % m)];
      }
      const double d = f[j] - val;
      q += d * d;
    }
    const double defect = norm2 > 0.0 ? std::sqrt(q / norm2) : 0.0;
    if (defect < best.defect) best = {a, defect};
  }
  return best;
}

AxisScan brute_axis_scan(const std::function<double(double)>& f, double period, int resolution,
                         int samples) {
  if (resolution < 1000) throw InvalidArgument("brute axis scan needs resolution >= 1000");
  if (!(period > 0.0)) throw InvalidArgument("period must be positive");
  std::vector<double> ys(static_cast<std::size_t>(samples));
  double norm2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    ys[static_cast<std::size_t>(i)] = period * i / samples;
    const double v = f(ys[static_cast<std::size_t>(i)]);
    norm2 += v * v;
  }
  AxisScan best{0.0, 1e300};
  const int m = 2 * resolution;
  if (m % samples == 0) {
    // a + y and a - y all land on a lattice of m points per period, so f is
    // tabulated once and the scan is lookups only
    std::vector<double> tab(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) tab[static_cast<std::size_t>(j)] = f(period * j / m);
    const int stride = m / samples;
    for (int r = 0; r < resolution; ++r) {
      double q = 0.0;
      for (int i = 0; i < samples; ++i) {
        const int up = (r + i * stride) % m;
        const int dn = ((r - i * stride) % m + m) % m;
        const double d = tab[static_cast<std::size_t>(up)] - tab[static_cast<std::size_t>(dn)];
        q += d * d;
      }
      const double defect = norm2 > 0.0 ? std::sqrt(q / norm2) : 0.0;
      if (defect < best.defect) best = {0.5 * period * r / resolution, defect};
    }
    return best;
  }
  for (int r = 0; r < resolution; ++r) {
    const double a = 0.5 * period * r / resolution;
    double q = 0.0;
    for (double y : ys) {
      const double d = f(a + y) - f(a - y);
      q += d * d;
    }
    const double defect = norm2 > 0.0 ? std::sqrt(q / norm2) : 0.0;
    if (defect < best.defect) best = {a, defect};
  }
  return best;
}

}  // namespace steadylab::oracle
