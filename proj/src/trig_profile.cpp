#include "steadylab/trig_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include "steadylab/errors.hpp"

namespace steadylab {

double Harmonic::amplitude() const { return std::hypot(cos_coef, sin_coef); }
double Harmonic::phase() const { return std::atan2(sin_coef, cos_coef); }

TrigProfile::TrigProfile(std::vector<TrigTerm> terms, double offset)
    : terms_(std::move(terms)), offset_(offset) {
  for (const auto& t : terms_) {
    if (!(t.frequency > 0.0) || !std::isfinite(t.frequency)) {
      throw InvalidArgument("trig term frequency must be positive");
    }
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
      throw InvalidArgument("trig term must be finite");
    }
  }
}

double TrigProfile::derivative(double y, int order) const {
  if (order < 0) throw InvalidArgument("negative derivative order");
  double s = order == 0 ? offset_ : 0.0;
  for (const auto& t : terms_) {
    double arg = t.frequency * y;
    if (t.kind == TermKind::kSin) arg -= std::numbers::pi / 2;
    if (t.kind == TermKind::kPhase) arg -= t.phase;
    // d^k/dy^k cos(arg) = f^k cos(arg + k pi/2)
    double v = 0.0;
    switch (order % 4) {
      case 0: v = std::cos(arg); break;
      case 1: v = -std::sin(arg); break;
      case 2: v = -std::cos(arg); break;
      default: v = std::sin(arg); break;
    }
    if (t.kind == TermKind::kSin) {
      // exact form avoids the rounded pi/2 shift
      const double a = t.frequency * y;
      switch (order % 4) {
        case 0: v = std::sin(a); break;
        case 1: v = std::cos(a); break;
        case 2: v = -std::sin(a); break;
        default: v = -std::cos(a); break;
      }
    }
    s += t.amplitude * std::pow(t.frequency, order) * v;
  }
  return s;
}

std::vector<double> TrigProfile::derivatives(double y, int max_order) const {
  if (max_order < 0) throw InvalidArgument("negative derivative order");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  out[0] = offset_;
  for (const auto& t : terms_) {
    // g = A cos(arg) or A sin(a); one sin/cos pair per term, then rotate
    double c, sn;
    if (t.kind == TermKind::kSin) {
      const double a = t.frequency * y;
      c = std::sin(a);
      sn = -std::cos(a);
    } else {
      const double arg = t.frequency * y - (t.kind == TermKind::kPhase ? t.phase : 0.0);
      c = std::cos(arg);
      sn = std::sin(arg);
    }
    // c, sn play the roles of cos(arg), sin(arg)
    const double cyc[4] = {c, -sn, -c, sn};
    double fk = 1.0;
    for (int k = 0; k <= max_order; ++k) {
      out[static_cast<std::size_t>(k)] += t.amplitude * fk * cyc[k % 4];
      fk *= t.frequency;
    }
  }
  return out;
}

std::vector<Harmonic> TrigProfile::harmonics() const {
  std::vector<Harmonic> hs;
  for (const auto& t : terms_) {
    double c = 0.0, s = 0.0;
    switch (t.kind) {
      case TermKind::kCos: c = t.amplitude; break;
      case TermKind::kSin: s = t.amplitude; break;
      case TermKind::kPhase:
        c = t.amplitude * std::cos(t.phase);
        s = t.amplitude * std::sin(t.phase);
        break;
    }
    auto it = std::find_if(hs.begin(), hs.end(), [&](const Harmonic& h) {
      return std::abs(h.frequency - t.frequency) <= 1e-12 * std::max(h.frequency, t.frequency);
    });
    if (it == hs.end()) {
      hs.push_back({t.frequency, c, s});
    } else {
      it->cos_coef += c;
      it->sin_coef += s;
    }
  }
  std::sort(hs.begin(), hs.end(),
            [](const Harmonic& a, const Harmonic& b) { return a.frequency < b.frequency; });
  return hs;
}

double TrigProfile::amplitude_norm() const {
  double s = 0.0;
  for (const auto& h : harmonics()) s += h.amplitude() * h.amplitude();
  return std::sqrt(s);
}

bool TrigProfile::is_zero() const { return amplitude_norm() == 0.0 && offset_ == 0.0; }

double TrigProfile::min_frequency() const {
  double f = 0.0;
  for (const auto& t : terms_) f = (f == 0.0) ? t.frequency : std::min(f, t.frequency);
  return f;
}

double TrigProfile::max_frequency() const {
  double f = 0.0;
  for (const auto& t : terms_) f = std::max(f, t.frequency);
  return f;
}

std::optional<std::pair<long, long>> rational_approx(double x, long max_den, double rel_tol) {
  if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a_d = std::floor(r);
    if (a_d > 1e12) break;
    const long a = static_cast<long>(a_d);
    const long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= rel_tol * x) {
      return std::make_pair(h1, k1);
    }
    const double frac = r - a_d;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

std::optional<double> TrigProfile::common_period() const {
  const auto hs = harmonics();
  if (hs.empty()) return std::nullopt;
  const double f1 = hs.front().frequency;
  long lcm_den = 1;
  std::vector<std::pair<long, long>> ratios;
  for (const auto& h : hs) {
    auto r = rational_approx(h.frequency / f1, 1000, 1e-12);
    if (!r) return std::nullopt;
    ratios.push_back(*r);
    lcm_den = std::lcm(lcm_den, r->second);
  }
  // base frequency f1 / lcm_den; every harmonic is an integer multiple of it
  return 2.0 * std::numbers::pi * static_cast<double>(lcm_den) / f1;
}

double TrigProfile::sup_norm(double span, int samples) const {
  double m = std::abs(offset_);
  for (int i = 0; i < samples; ++i) {
    m = std::max(m, std::abs((*this)(span * static_cast<double>(i) / samples)));
  }
  return m;
}

std::string to_string(TermKind k) {
  switch (k) {
    case TermKind::kCos: return "cos";
    case TermKind::kSin: return "sin";
    case TermKind::kPhase: return "phase";
  }
  return "cos";
}

nlohmann::json to_json(const TrigProfile& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    terms.push_back({{"amp", t.amplitude},
                     {"freq", t.frequency},
                     {"kind", to_string(t.kind)},
                     {"phase", t.phase}});
  }
  return {{"terms", terms}, {"offset", p.offset()}};
}

}  // namespace steadylab
