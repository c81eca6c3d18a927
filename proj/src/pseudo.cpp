#include "pseudo.hpp"

#include <cmath>

#include "steadylab/errors.hpp"

namespace steadylab::detail {

std::vector<std::vector<double>> derivatives(const Grid& grid, const Spectrum& spec,
                                             int max_order) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(max_order) + 1);
  out.push_back(inverse_values(grid, spec));
  for (int k = 1; k <= max_order; ++k) {
    Spectrum s(spec);
    differentiate_spectrum(grid, s, k);
    out.push_back(inverse_values(grid, s));
  }
  return out;
}

std::vector<double> power(const std::vector<double>& w, int p) {
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    double x = 1.0;
    for (int i = 0; i < p; ++i) x *= w[j];
    out[j] = x;
  }
  return out;
}

Spectrum truncated_forward(const Grid& grid, const std::vector<double>& values, double fraction) {
  Spectrum s = forward(grid, values);
  dealias_spectrum(s, grid.size(), fraction);
  return s;
}

void ddx(const Grid& grid, Spectrum& spec) { differentiate_spectrum(grid, spec, 1); }

Trajectory run(const Field& v0, const SemiLinearProblem& problem, ModelParams params,
               double t_end, double dt, int snapshot_every) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (snapshot_every < 1) throw InvalidArgument("snapshot_every must be >= 1");
  const Grid& grid = v0.grid();
  std::vector<Field> snaps;
  snaps.emplace_back(grid, v0.values(), 0.0);
  if (t_end == 0.0) return Trajectory(std::move(snaps), std::move(params), dt);

  const double ratio = t_end / dt;
  long full = static_cast<long>(std::floor(ratio + 1e-9));
  double tail = t_end - static_cast<double>(full) * dt;
  if (tail <= 1e-12 * dt) tail = 0.0;
  const long total = full + (tail > 0.0 ? 1 : 0);

  Rk4Stepper stepper(problem, dt);
  Spectrum v = forward(v0);
  for (long i = 1; i <= full; ++i) {
    stepper.step(v, static_cast<double>(i - 1) * dt);
    const double t = (i == total) ? t_end : static_cast<double>(i) * dt;
    if (i % snapshot_every == 0 || i == total) snaps.emplace_back(grid, inverse_values(grid, v), t);
  }
  if (tail > 0.0) {
    Rk4Stepper last(problem, tail);
    last.step(v, static_cast<double>(full) * dt);
    snaps.emplace_back(grid, inverse_values(grid, v), t_end);
  }
  return Trajectory(std::move(snaps), std::move(params), dt);
}

}  // namespace steadylab::detail
