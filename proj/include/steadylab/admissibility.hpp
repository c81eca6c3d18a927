#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "steadylab/params.hpp"
#include "steadylab/trig_profile.hpp"

namespace steadylab {

// How the a5 (v^n)_x term enters B. kExact differentiates v^n honestly
// (factor n); kPaperVerbatim keeps the (n-1) factor of the published
// expansion.
enum class NonlinearFactor { kExact, kPaperVerbatim };

enum class Basis { kSin, kCos };

// Residual content of the single-frequency profile g = c3 cos(w y) + c4 sin(w y),
// written as RHS - LHS of the traveling-wave constraint.
struct FrequencyDecomposition {
  std::array<double, 6> A{};
  double omega = 0.0;
  // (multiple of omega, basis) -> coefficient
  std::map<std::pair<int, Basis>, double> B_terms;
  // Published top-frequency expansion, only for m >= 3 or n >= 4.
  std::map<std::pair<int, Basis>, double> B_high_verbatim;
  bool explicit_low = false;

  // A-part plus B-part at frequency k*omega.
  double assembled(int k, Basis b) const;
  int max_multiple() const;
};

std::array<double, 6> compute_A(const PerturbedParams& p, double c3, double c4, double omega,
                                double lambda_dot);

// Harmonic content of a5 (g^n)' - b4 g^m g'.
std::map<std::pair<int, Basis>, double> compute_B(const PerturbedParams& p, double c3, double c4,
                                                  double omega,
                                                  NonlinearFactor f = NonlinearFactor::kExact);

// Published B^{high} with Heaviside gates and parity tables.
std::map<std::pair<int, Basis>, double> compute_B_high(const PerturbedParams& p, double c3,
                                                       double c4, double omega,
                                                       NonlinearFactor f = NonlinearFactor::kExact);

FrequencyDecomposition decompose(const PerturbedParams& p, double c3, double c4, double omega,
                                 double lambda_dot, NonlinearFactor f = NonlinearFactor::kExact);

struct ResidualReport {
  double max = 0.0;
  double base_frequency = 0.0;
  // k -> (sin, cos) projection at k * base_frequency; k = 0 stores the mean in cos.
  std::map<int, std::pair<double, double>> per_frequency;
  bool commensurate = true;
};

ResidualReport nonlinear_residual(const TrigProfile& g, const PerturbedParams& p,
                                  double lambda_dot);

struct EquationCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct AdmissibilityReport {
  std::string case_label;  // "1".."6" or "outside_enumerated"
  bool enumerated = true;
  std::vector<EquationCheck> equations;
  bool satisfied = false;
  double lambda_dot = 0.0;
  bool lambda_dot_solved = false;
  std::optional<double> wave_speed;
  double scale = 1.0;
  double linear_constraint = 0.0;  // b1 - b2 w^2 + b10 w^4
  ResidualReport residual;
  std::vector<std::string> warnings;
};

double tolerance_scale(const PerturbedParams& p, double c3, double c4, double omega);

// Solve the frequency-one equations for the axis speed (least squares over
// the sin and cos rows, exact when they are consistent).
double solve_lambda_dot(const PerturbedParams& p, double c3, double c4, double omega,
                        NonlinearFactor f = NonlinearFactor::kExact);

AdmissibilityReport check_conditions(const PerturbedParams& p, double c3, double c4, double omega,
                                     std::optional<double> lambda_dot = std::nullopt,
                                     NonlinearFactor f = NonlinearFactor::kExact);

double wave_speed(const PerturbedParams& p, double c3, double c4, double omega);

TrigProfile single_frequency_profile(double c3, double c4, double omega);

nlohmann::json to_json(const AdmissibilityReport& r);

}  // namespace steadylab
