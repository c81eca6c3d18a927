#include "steadylab/integrator.hpp"

#include <cmath>

#include "steadylab/errors.hpp"

namespace steadylab {

void check_finite(const Spectrum& s, double time) {
  for (const auto& c : s) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e200) {
      throw BlowUp("non-finite or overflowing state", time);
    }
  }
}

Rk4Stepper::Rk4Stepper(SemiLinearProblem problem, double dt)
    : problem_(std::move(problem)), dt_(dt) {
  if (!std::isfinite(dt) || dt == 0.0) throw InvalidArgument("dt must be finite and nonzero");
  if (problem_.linear.size() != problem_.grid.num_modes()) {
    throw InvalidArgument("linear symbol size does not match grid");
  }
  if (problem_.integrating_factor) {
    e_full_.resize(problem_.linear.size());
    e_half_.resize(problem_.linear.size());
    for (std::size_t k = 0; k < problem_.linear.size(); ++k) {
      e_full_[k] = std::exp(problem_.linear[k] * dt_);
      e_half_[k] = std::exp(problem_.linear[k] * (0.5 * dt_));
    }
  }
}

void Rk4Stepper::eval_nonlinear(const Spectrum& v, Spectrum& out) const {
  if (problem_.nonlinear) {
    problem_.nonlinear(v, out);
  } else {
    out.assign(v.size(), 0.0);
  }
}

void Rk4Stepper::rhs(const Spectrum& v, Spectrum& out) const {
  eval_nonlinear(v, out);
  for (std::size_t k = 0; k < v.size(); ++k) out[k] += problem_.linear[k] * v[k];
}

void Rk4Stepper::step(Spectrum& v, double time) const {
  const std::size_t n = v.size();
  const double h = dt_;
  Spectrum k1(n), k2(n), k3(n), k4(n), tmp(n);
  if (!problem_.integrating_factor) {
    rhs(v, k1);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + 0.5 * h * k1[k];
    check_finite(tmp, time);
    rhs(tmp, k2);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + 0.5 * h * k2[k];
    check_finite(tmp, time);
    rhs(tmp, k3);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + h * k3[k];
    check_finite(tmp, time);
    rhs(tmp, k4);
    for (std::size_t k = 0; k < n; ++k) {
      v[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
  } else {
    // Lawson RK4: exact propagation of the linear part.
    const Spectrum& E = e_full_;
    const Spectrum& E2 = e_half_;
    eval_nonlinear(v, k1);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = E2[k] * (v[k] + 0.5 * h * k1[k]);
    check_finite(tmp, time);
    eval_nonlinear(tmp, k2);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = E2[k] * v[k] + 0.5 * h * k2[k];
    check_finite(tmp, time);
    eval_nonlinear(tmp, k3);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = E[k] * v[k] + h * E2[k] * k3[k];
    check_finite(tmp, time);
    eval_nonlinear(tmp, k4);
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = E[k] * v[k] + h / 6.0 * (E[k] * k1[k] + 2.0 * E2[k] * (k2[k] + k3[k]) + k4[k]);
    }
  }
  v.back() = v.back().real();
  check_finite(v, time + h);
}

}  // namespace steadylab
