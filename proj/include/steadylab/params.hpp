#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "steadylab/grid.hpp"
#include "steadylab/spectral.hpp"

namespace steadylab {

// v_t - alpha v_xxt + beta v_xxxxt + a v_x + b v^m v_x + kappa v_xxx - mu v_xxxxx = 0
struct GRKRLWParams {
  double a = 0.0;
  double b = 0.0;
  double kappa = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int m = 1;

  void validate() const;
  SymbolParams symbol() const { return {alpha, beta}; }
};

// v_t + a1 v_x + a2 v_xxx + a3 v_xxt + a4 v_xxxxt + a5 (v^n)_x = R(v)
struct PerturbedParams {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0, b6 = 0.0;
  double b7 = 0.0, b8 = 0.0, b9 = 0.0, b10 = 0.0, b11 = 0.0, b12 = 0.0;
  int m = 1;
  int n = 2;

  void validate() const;
  // Throws ConfigurationError naming the first wavenumber where
  // 1 - a3 xi^2 + a4 xi^4 vanishes.
  void validate_on(const Grid& grid) const;
  double mass_symbol(double xi) const { return 1.0 - a3 * xi * xi + a4 * xi * xi * xi * xi; }

  std::array<double, 5> a_coeffs() const { return {a1, a2, a3, a4, a5}; }
  std::array<double, 12> b_coeffs() const {
    return {b1, b2, b3, b4, b5, b6, b7, b8, b9, b10, b11, b12};
  }
  // Embedding of the unperturbed equation (all b except b11 = mu vanish).
  static PerturbedParams from_rkrlw(const GRKRLWParams& p);
};

enum class Preset {
  kKdV,
  kRLW,
  kRosenauRLW,
  kRosenauKdV,
  kRosenauKdVRLW,
  kRosenauKawahara,
  kRosenauKawaharaRLW,
};

// Which coefficients a named model pins to zero. Free values come from the user.
struct PresetMask {
  Preset preset;
  std::string name;
  std::vector<std::string> zero;  // coefficient names forced to 0
  std::vector<std::string> free;
  std::optional<int> fixed_m;
  std::string note;

  // Check that p respects the mask; throws InvalidArgument otherwise.
  void check(const GRKRLWParams& p) const;
  // Copy p with the pinned coefficients zeroed and m fixed where required.
  GRKRLWParams apply(GRKRLWParams p) const;
};

PresetMask preset(Preset which);
PresetMask preset(const std::string& name);
std::vector<std::string> preset_names();

// Highest polynomial degree among the active nonlinear terms (1 if none).
int nonlinear_degree(const GRKRLWParams& p);
int nonlinear_degree(const PerturbedParams& p);
// 2/3 for degree <= 2, 1/2 otherwise.
double dealias_fraction_for_degree(int degree);

}  // namespace steadylab
