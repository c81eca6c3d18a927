#pragma once

#include <functional>

#include "steadylab/grid.hpp"
#include "steadylab/spectral.hpp"

namespace steadylab {

// v_hat' = linear(xi) * v_hat + nonlinear(v_hat), advanced by RK4 either
// directly or with an integrating factor on the linear part.
struct SemiLinearProblem {
  Grid grid;
  Spectrum linear;
  std::function<void(const Spectrum& in, Spectrum& out)> nonlinear;  // may be empty
  bool integrating_factor = false;
};

class Rk4Stepper {
 public:
  Rk4Stepper(SemiLinearProblem problem, double dt);

  // Advance in place; `time` is only used for the blow-up report.
  void step(Spectrum& v, double time) const;
  double dt() const { return dt_; }

 private:
  void rhs(const Spectrum& v, Spectrum& out) const;
  void eval_nonlinear(const Spectrum& v, Spectrum& out) const;

  SemiLinearProblem problem_;
  double dt_;
  Spectrum e_full_, e_half_;
};

// Throws BlowUp if any bin is not finite.
void check_finite(const Spectrum& s, double time);

}  // namespace steadylab
