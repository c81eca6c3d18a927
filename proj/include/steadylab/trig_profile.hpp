#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace steadylab {

enum class TermKind { kCos, kSin, kPhase };

// cos: A cos(f y); sin: A sin(f y); phase: A cos(f y - phase)
struct TrigTerm {
  double amplitude = 0.0;
  double frequency = 1.0;
  TermKind kind = TermKind::kCos;
  double phase = 0.0;
};

// Same-frequency content folded into a cos(f y) + b sin(f y).
struct Harmonic {
  double frequency = 0.0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
  double amplitude() const;
  double phase() const;  // atan2(sin_coef, cos_coef)
};

class TrigProfile {
 public:
  TrigProfile() = default;
  TrigProfile(std::vector<TrigTerm> terms, double offset = 0.0);

  const std::vector<TrigTerm>& terms() const { return terms_; }
  double offset() const { return offset_; }

  double operator()(double y) const { return derivative(y, 0); }
  double derivative(double y, int order) const;
  // Orders 0..max_order at once.
  std::vector<double> derivatives(double y, int max_order) const;

  // Terms merged by frequency (relative tolerance 1e-12), sorted ascending.
  std::vector<Harmonic> harmonics() const;
  // sqrt of the sum of squared harmonic amplitudes (offset excluded).
  double amplitude_norm() const;
  bool is_zero() const;
  double min_frequency() const;
  double max_frequency() const;
  // Common period if all frequency ratios are rational with denominator
  // <= 1000; otherwise none.
  std::optional<double> common_period() const;
  // Largest |g| over `samples` points spanning `span`.
  double sup_norm(double span, int samples) const;

 private:
  std::vector<TrigTerm> terms_;
  double offset_ = 0.0;
};

std::string to_string(TermKind k);
nlohmann::json to_json(const TrigProfile& p);

// Best rational approximation p/q of x with q <= max_den within rel_tol.
std::optional<std::pair<long, long>> rational_approx(double x, long max_den, double rel_tol);

}  // namespace steadylab
