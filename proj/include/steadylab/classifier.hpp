#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steadylab/trig_profile.hpp"

namespace steadylab {

// Coefficients of b1 g + b2 g'' + b10 g'''' = 0.
struct ConstraintCoefficients {
  double b1 = 0.0;
  double b2 = 0.0;
  double b10 = 0.0;
  double norm() const;
  double max_abs() const;
};

enum class CaseTag {
  kIaZeroRoot,
  kIbBothPositive,
  kIcOppositeSigns,
  kIdBothNegative,
  kIIaPositiveDouble,
  kIIbZeroQuadruple,
  kIIcNegativeDouble,
  kIIIComplexPair,
  kDegenerateB10Zero,
  kTrivialOnly,
};
std::string to_string(CaseTag t);

struct RootStructure {
  CaseTag tag = CaseTag::kTrivialOnly;
  double discriminant = 0.0;
  std::vector<std::complex<double>> z_roots;
  std::vector<std::complex<double>> tau_roots;
  std::vector<std::string> warnings;
};

RootStructure classify_roots(const ConstraintCoefficients& cc);

enum class Condition { kI, kII, kIII, kIV, kV, kNone };
std::string to_string(Condition c);
Condition condition_check(const ConstraintCoefficients& cc);

// Sample abscissae come from the coefficients; values from the initial datum.
struct InitialSamples {
  std::vector<double> abscissae;
  std::vector<double> values;
  // Extra points for the two-frequency case, only used when the primary
  // 4x4 interpolation system is singular.
  std::vector<double> aux_abscissae;
  std::vector<double> aux_values;
};

std::vector<double> sample_abscissae(const RootStructure& rs, const ConstraintCoefficients& cc);
InitialSamples make_samples(const RootStructure& rs, const ConstraintCoefficients& cc,
                            const std::function<double(double)>& v0);

struct DerivedQuantities {
  double alpha1 = 0, alpha2 = 0, beta1 = 0, beta2 = 0;
  double c0 = 0;
  std::array<double, 4> c_tilde{};
  std::array<double, 4> c_verbatim{};        // e^{(i+1)pi} c~_i / c0
  std::array<double, 4> c_sign_corrected{};  // (-1)^{i+1} c~_i / c0
  std::array<double, 4> c{};                 // 4x4 interpolation solve
  double condition_number = 0;
  double verbatim_discrepancy = 0;  // max relative difference to the solve
  bool verbatim_agrees = false;
  bool sign_corrected_agrees = false;
  double theta1 = 0, theta2 = 0;                  // signed atan2 phases
  double theta1_arccos = 0, theta2_arccos = 0;    // [0, pi] convention
  bool arccos_phase_mismatch = false;
  double thetabar1 = 0, thetabar2 = 0;
  double r1 = 0, r2 = 0;
};

// Only for the two-frequency regime (b10 != 0, D > 0, (sqrt(D)-b2) b10 < 0
// with b1 b10 > 0). Throws DegenerateInput for tiny c0 and SingularSystem
// when the interpolation matrix is singular.
DerivedQuantities derived_quantities(const ConstraintCoefficients& cc,
                                     const InitialSamples& samples);

enum class Outcome { kBounded, kNoBoundedSolution, kAsymmetricOnly };
std::string to_string(Outcome o);

struct Construction {
  Outcome outcome = Outcome::kNoBoundedSolution;
  std::optional<TrigProfile> profile;
  std::optional<DerivedQuantities> derived;
  std::string reason;
  std::vector<std::string> warnings;
};

Construction construct_profile(const RootStructure& rs, const ConstraintCoefficients& cc,
                               const InitialSamples& samples);

struct SymmetryVerdict {
  bool symmetric = true;
  std::optional<double> axis;
  std::string method;  // "single", "commensurate" or "numerical"
};

// Closed-form phase test when the two frequencies are integer multiples of a common
// base frequency; numerical on a long window otherwise.
SymmetryVerdict is_symmetric_trig(const TrigProfile& profile);

struct SetAResult {
  bool member = false;
  DerivedQuantities derived;
};
SetAResult in_set_A(const ConstraintCoefficients& cc, const InitialSamples& samples);

// Pattern match of the solved c-vector against the known sub-cases of the
// two-frequency regime; the stated coefficient formulas are evaluated for
// cross-validation only.
struct SubcaseReport {
  std::string label;  // "a".."i" or "none"
  std::array<double, 4> formula_c{};
  bool formula_agrees = false;
  bool lattice_condition_k0 = false;
};
SubcaseReport match_subcase(const DerivedQuantities& dq, const InitialSamples& samples);

// max |b1 g + b2 g'' + b10 g''''| / (||b|| ||g||_inf) over 1000 points per period.
double ode_residual(const TrigProfile& g, const ConstraintCoefficients& cc);
// max |g(x_i) - v_i| over the construction abscissae.
double interpolation_error(const TrigProfile& g, const InitialSamples& samples);

struct Classification {
  ConstraintCoefficients cc;
  RootStructure roots;
  Condition condition = Condition::kNone;
  Construction construction;
  InitialSamples samples;
  std::optional<SymmetryVerdict> symmetry;
  std::optional<SubcaseReport> subcase;
  std::optional<bool> in_set_A;
  std::vector<std::string> warnings;

  bool bounded() const;
  bool symmetric() const;
};

Classification classify(const ConstraintCoefficients& cc,
                        const std::function<double(double)>& v0);
nlohmann::json to_json(const Classification& c);

}  // namespace steadylab
