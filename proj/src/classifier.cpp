#include "steadylab/classifier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "steadylab/errors.hpp"

namespace steadylab {
namespace {

constexpr double kPi = std::numbers::pi;

double disc(const ConstraintCoefficients& cc) { return cc.b2 * cc.b2 - 4.0 * cc.b1 * cc.b10; }

double disc_tol(const ConstraintCoefficients& cc) {
  return 1e-14 * std::max(cc.b2 * cc.b2, 4.0 * std::abs(cc.b1 * cc.b10));
}

enum class DSign { kNeg, kZero, kPos };

DSign disc_sign(const ConstraintCoefficients& cc) {
  const double d = disc(cc);
  if (std::abs(d) <= disc_tol(cc)) return DSign::kZero;
  return d > 0.0 ? DSign::kPos : DSign::kNeg;
}

// (sqrt(D) - b2) evaluated without cancellation when b2 > 0.
double sqrtd_minus_b2(const ConstraintCoefficients& cc) {
  const double sd = std::sqrt(std::max(0.0, disc(cc)));
  if (cc.b2 > 0.0) return -4.0 * cc.b1 * cc.b10 / (sd + cc.b2);
  return sd - cc.b2;
}

// Real roots of b10 z^2 + b2 z + b1 for D > 0, returned as (z+, z-).
std::pair<double, double> real_roots(const ConstraintCoefficients& cc) {
  const double sd = std::sqrt(disc(cc));
  if (cc.b1 == 0.0) {
    // z+ = (-b2 + |b2|)/(2 b10), z- = (-b2 - |b2|)/(2 b10)
    const double zp = (-cc.b2 + std::abs(cc.b2)) / (2.0 * cc.b10);
    const double zm = (-cc.b2 - std::abs(cc.b2)) / (2.0 * cc.b10);
    return {zp, zm};
  }
  const double q = -0.5 * (cc.b2 + (cc.b2 >= 0.0 ? sd : -sd));
  const double za = q / cc.b10, zb = cc.b1 / q;
  // z+ carries +sqrt(D): it is the larger root when b10 > 0.
  if (cc.b2 >= 0.0) return {zb, za};
  return {za, zb};
}

struct Normalized {
  double b1, b2, b10;
};

Normalized normalize(const ConstraintCoefficients& cc) {
  const double s = cc.b10 < 0.0 ? -1.0 : 1.0;
  return {s * cc.b1, s * cc.b2, s * cc.b10};
}

struct Betas {
  double alpha1, alpha2, beta1, beta2;
};

Betas betas(const ConstraintCoefficients& cc) {
  const Normalized n = normalize(cc);
  const double sd = std::sqrt(n.b2 * n.b2 - 4.0 * n.b1 * n.b10);
  const double root = std::sqrt(n.b1 * n.b10);
  Betas b;
  b.alpha1 = std::abs(sd + n.b2) / (2.0 * root);
  b.alpha2 = 2.0 * root / (n.b2 + sd);  // |sd - b2| / (2 sqrt(b1 b10)) without cancellation
  b.beta1 = std::sqrt((n.b2 + sd) / (2.0 * n.b1));
  b.beta2 = std::sqrt(2.0 * n.b10 / (n.b2 + sd));
  return b;
}

bool two_frequency_regime(const ConstraintCoefficients& cc) {
  return cc.b10 != 0.0 && disc_sign(cc) == DSign::kPos && cc.b1 * cc.b10 > 0.0 &&
         -cc.b2 / cc.b10 < 0.0;
}

double negative_root(const ConstraintCoefficients& cc) {
  const auto [zp, zm] = real_roots(cc);
  return zp < 0.0 ? zp : zm;
}

TrigTerm cos_term(double a, double f) { return {a, f, TermKind::kCos, 0.0}; }
TrigTerm sin_term(double a, double f) { return {a, f, TermKind::kSin, 0.0}; }

double wrap_mod(double x, double p) {
  double w = x - std::floor(x / p) * p;
  if (w >= p) w -= p;
  if (w < 0.0) w = 0.0;
  return w;
}

double dist_to_lattice(double x, double spacing) {
  return std::abs(x - spacing * std::round(x / spacing));
}

}  // namespace

double ConstraintCoefficients::norm() const { return std::sqrt(b1 * b1 + b2 * b2 + b10 * b10); }
double ConstraintCoefficients::max_abs() const {
  return std::max({std::abs(b1), std::abs(b2), std::abs(b10)});
}

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::kIaZeroRoot: return "I_a_zero_root";
    case CaseTag::kIbBothPositive: return "I_b_both_positive";
    case CaseTag::kIcOppositeSigns: return "I_c_opposite_signs";
    case CaseTag::kIdBothNegative: return "I_d_both_negative";
    case CaseTag::kIIaPositiveDouble: return "II_a_positive_double";
    case CaseTag::kIIbZeroQuadruple: return "II_b_zero_quadruple";
    case CaseTag::kIIcNegativeDouble: return "II_c_negative_double";
    case CaseTag::kIIIComplexPair: return "III_complex_pair";
    case CaseTag::kDegenerateB10Zero: return "Degenerate_b10_zero";
    case CaseTag::kTrivialOnly: return "TrivialOnly";
  }
  return "unknown";
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::kI: return "i";
    case Condition::kII: return "ii";
    case Condition::kIII: return "iii";
    case Condition::kIV: return "iv";
    case Condition::kV: return "v";
    case Condition::kNone: return "none";
  }
  return "none";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kBounded: return "bounded";
    case Outcome::kNoBoundedSolution: return "no_bounded_solution";
    case Outcome::kAsymmetricOnly: return "asymmetric_only";
  }
  return "unknown";
}

RootStructure classify_roots(const ConstraintCoefficients& cc) {
  for (double x : {cc.b1, cc.b2, cc.b10}) {
    if (!std::isfinite(x)) throw InvalidArgument("constraint coefficients must be finite");
  }
  if (cc.b1 == 0.0 && cc.b2 == 0.0 && cc.b10 == 0.0) {
    throw HypothesisViolation("b1, b2 and b10 all vanish; the classification needs b1^2+b2^2+b10^2 != 0");
  }
  RootStructure rs;
  auto add_tau = [&](std::complex<double> z) {
    const auto t = std::sqrt(z);
    rs.tau_roots.push_back(t);
    rs.tau_roots.push_back(-t);
  };
  if (cc.b10 == 0.0) {
    if (cc.b2 == 0.0) {
      rs.tag = CaseTag::kTrivialOnly;
      return rs;
    }
    rs.tag = CaseTag::kDegenerateB10Zero;
    const double z = -cc.b1 / cc.b2;
    rs.z_roots = {z};
    add_tau(z);
    return rs;
  }
  const double D = disc(cc);
  rs.discriminant = D;
  switch (disc_sign(cc)) {
    case DSign::kZero: {
      if (D != 0.0) {
        std::ostringstream os;
        os.precision(3);
        os << "discriminant " << D << " within tie tolerance; dispatched to Case II";
        rs.warnings.push_back(os.str());
      }
      const double z = -cc.b2 / (2.0 * cc.b10);
      rs.z_roots = {z, z};
      add_tau(z);
      add_tau(z);
      if (cc.b2 == 0.0) rs.tag = CaseTag::kIIbZeroQuadruple;
      else rs.tag = (z > 0.0) ? CaseTag::kIIaPositiveDouble : CaseTag::kIIcNegativeDouble;
      return rs;
    }
    case DSign::kPos: {
      const auto [zp, zm] = real_roots(cc);
      rs.z_roots = {zp, zm};
      add_tau(zp);
      add_tau(zm);
      if (cc.b1 == 0.0) rs.tag = CaseTag::kIaZeroRoot;
      else if (cc.b1 * cc.b10 < 0.0) rs.tag = CaseTag::kIcOppositeSigns;
      else if (-cc.b2 / cc.b10 > 0.0) rs.tag = CaseTag::kIbBothPositive;
      else rs.tag = CaseTag::kIdBothNegative;
      return rs;
    }
    case DSign::kNeg: {
      const double re = -cc.b2 / (2.0 * cc.b10);
      const double im = std::sqrt(-D) / (2.0 * std::abs(cc.b10));
      rs.z_roots = {{re, im}, {re, -im}};
      add_tau({re, im});
      add_tau({re, -im});
      rs.tag = CaseTag::kIIIComplexPair;
      return rs;
    }
  }
  return rs;
}

Condition condition_check(const ConstraintCoefficients& cc) {
  const DSign ds = disc_sign(cc);
  if (cc.b1 == 0.0 && cc.b2 * cc.b10 > 0.0) return Condition::kI;
  if (ds == DSign::kPos && cc.b1 < 0.0 && cc.b10 > 0.0) return Condition::kII;
  if (ds == DSign::kPos && cc.b10 != 0.0 && sqrtd_minus_b2(cc) * cc.b10 < 0.0) {
    return Condition::kIII;
  }
  if (ds == DSign::kZero && cc.b10 != 0.0 && cc.b2 * cc.b10 > 0.0) return Condition::kIV;
  if (cc.b10 == 0.0 && cc.b2 != 0.0 && cc.b1 * cc.b2 > 0.0) return Condition::kV;
  return Condition::kNone;
}

std::vector<double> sample_abscissae(const RootStructure& rs, const ConstraintCoefficients& cc) {
  switch (rs.tag) {
    case CaseTag::kIaZeroRoot:
      if (cc.b2 * cc.b10 > 0.0) {
        const double s = std::sqrt(cc.b10 / cc.b2);
        return {0.0, s * kPi / 2.0, s * kPi};
      }
      return {};
    case CaseTag::kIcOppositeSigns: {
      const double beta2 = 1.0 / std::sqrt(-negative_root(cc));
      return {0.0, kPi / 2.0 * beta2};
    }
    case CaseTag::kIdBothNegative: {
      const Betas b = betas(cc);
      return {0.0, kPi / 2.0 * b.beta1, kPi / 2.0 * b.beta2, kPi * b.beta1};
    }
    case CaseTag::kIIcNegativeDouble:
      return {0.0, kPi * std::sqrt(cc.b10 / (2.0 * cc.b2))};
    case CaseTag::kDegenerateB10Zero:
      if (cc.b1 * cc.b2 > 0.0) return {0.0, kPi / 2.0 * std::sqrt(cc.b2 / cc.b1)};
      return {};
    default:
      return {};
  }
}

InitialSamples make_samples(const RootStructure& rs, const ConstraintCoefficients& cc,
                            const std::function<double(double)>& v0) {
  InitialSamples s;
  s.abscissae = sample_abscissae(rs, cc);
  for (double x : s.abscissae) s.values.push_back(v0(x));
  if (rs.tag == CaseTag::kIdBothNegative) {
    const Betas b = betas(cc);
    s.aux_abscissae = {kPi * b.beta2, 1.5 * kPi * b.beta1, 1.5 * kPi * b.beta2,
                       kPi / 3.0 * b.beta1, kPi / 5.0 * b.beta2};
    for (double x : s.aux_abscissae) s.aux_values.push_back(v0(x));
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) throw InvalidArgument("initial datum is not finite at a sample point");
  }
  return s;
}

DerivedQuantities derived_quantities(const ConstraintCoefficients& cc,
                                     const InitialSamples& samples) {
  if (!two_frequency_regime(cc)) {
    throw HypothesisViolation(
        "derived quantities need b10 != 0, b2^2 > 4 b1 b10 and two negative roots");
  }
  if (samples.values.size() != 4) {
    throw InvalidArgument("two-frequency construction needs four samples");
  }
  DerivedQuantities dq;
  const Betas b = betas(cc);
  dq.alpha1 = b.alpha1;
  dq.alpha2 = b.alpha2;
  dq.beta1 = b.beta1;
  dq.beta2 = b.beta2;

  const double s1 = std::sin(kPi / 2 * b.alpha1), co1 = std::cos(kPi / 2 * b.alpha1);
  const double s2 = std::sin(kPi / 2 * b.alpha2), co2 = std::cos(kPi / 2 * b.alpha2);
  const double C1 = std::cos(kPi * b.alpha1), S1 = std::sin(kPi * b.alpha1);
  const double V0 = samples.values[0], Vb1 = samples.values[1], Vb2 = samples.values[2],
               Vpi = samples.values[3];

  dq.c0 = (1.0 - s1 * s2) * (1.0 + C1) + (co2 + co1 * s2) * S1;
  dq.c_tilde[0] = (1.0 - s1 * s2) * (C1 * V0 - Vpi) + (co1 * s2 * V0 - s2 * Vb1 + Vb2) * S1;
  dq.c_tilde[1] = (co1 * V0 - Vb1) * (1.0 + co2 * S1) - (s1 * co2 * V0 + Vb1) * C1 +
                  (co1 + s1 * co2) * Vpi;
  dq.c_tilde[2] = (1.0 - s1 * s2) * (V0 + Vpi) + (co2 * V0 + s2 * Vb1 - Vb2) * S1;
  dq.c_tilde[3] = (C1 * co2 - co1 * s2) * V0 + (1.0 + C1) * (s2 * Vb1 - Vb2) -
                  (co2 + co1 * s2) * Vpi;
  if (std::abs(dq.c0) < 1e-13) {
    throw DegenerateInput("normalization c0 is numerically zero; closed form undefined");
  }
  for (int i = 0; i < 4; ++i) {
    const int idx = i + 1;
    dq.c_verbatim[static_cast<std::size_t>(i)] =
        std::exp((idx + 1) * kPi) * dq.c_tilde[static_cast<std::size_t>(i)] / dq.c0;
    dq.c_sign_corrected[static_cast<std::size_t>(i)] =
        ((idx + 1) % 2 == 0 ? 1.0 : -1.0) * dq.c_tilde[static_cast<std::size_t>(i)] / dq.c0;
  }

  Eigen::Matrix4d M;
  M << 1, 0, 1, 0,
       0, 1, co1, s1,
       co2, s2, 0, 1,
       -1, 0, C1, S1;
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
  const auto sv = svd.singularValues();
  dq.condition_number = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
  if (!(dq.condition_number < 1e12)) {
    std::ostringstream os;
    os.precision(3);
    os << "4x4 interpolation system is singular (condition number " << dq.condition_number << ")";
    throw SingularSystem(os.str(), dq.condition_number);
  }
  const Eigen::Vector4d rhs(V0, Vb1, Vb2, Vpi);
  const Eigen::Vector4d c = M.fullPivLu().solve(rhs);
  double cmax = 0.0, dv = 0.0, ds = 0.0;
  for (int i = 0; i < 4; ++i) {
    dq.c[static_cast<std::size_t>(i)] = c(i);
    cmax = std::max(cmax, std::abs(c(i)));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    dv = std::max(dv, std::abs(dq.c_verbatim[i] - dq.c[i]));
    ds = std::max(ds, std::abs(dq.c_sign_corrected[i] - dq.c[i]));
  }
  const double denom = cmax > 0.0 ? cmax : 1.0;
  dq.verbatim_discrepancy = dv / denom;
  dq.verbatim_agrees = dq.verbatim_discrepancy <= 1e-8;
  dq.sign_corrected_agrees = ds / denom <= 1e-8;

  dq.r1 = std::hypot(dq.c[0], dq.c[1]);
  dq.r2 = std::hypot(dq.c[2], dq.c[3]);
  dq.theta1 = std::atan2(dq.c[1], dq.c[0]);
  dq.theta2 = std::atan2(dq.c[3], dq.c[2]);
  dq.theta1_arccos = dq.r1 > 0.0 ? std::acos(std::clamp(dq.c[0] / dq.r1, -1.0, 1.0)) : 0.0;
  dq.theta2_arccos = dq.r2 > 0.0 ? std::acos(std::clamp(dq.c[2] / dq.r2, -1.0, 1.0)) : 0.0;
  dq.arccos_phase_mismatch = std::abs(dq.theta1 - dq.theta1_arccos) > 1e-12 ||
                             std::abs(dq.theta2 - dq.theta2_arccos) > 1e-12;
  dq.thetabar1 = dq.theta1 / dq.beta2;
  dq.thetabar2 = dq.theta2 / dq.beta1;
  return dq;
}

namespace {

TrigProfile two_frequency_profile(double beta1, double beta2, const std::array<double, 4>& c) {
  return TrigProfile({cos_term(c[0], 1.0 / beta1), sin_term(c[1], 1.0 / beta1),
                      cos_term(c[2], 1.0 / beta2), sin_term(c[3], 1.0 / beta2)});
}

// Least-squares fit on primary plus auxiliary samples.
std::array<double, 4> fit_augmented(double beta1, double beta2, const InitialSamples& s) {
  std::vector<double> xs(s.abscissae), vs(s.values);
  xs.insert(xs.end(), s.aux_abscissae.begin(), s.aux_abscissae.end());
  vs.insert(vs.end(), s.aux_values.begin(), s.aux_values.end());
  Eigen::MatrixXd A(static_cast<long>(xs.size()), 4);
  Eigen::VectorXd rhs(static_cast<long>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long r = static_cast<long>(i);
    A(r, 0) = std::cos(xs[i] / beta1);
    A(r, 1) = std::sin(xs[i] / beta1);
    A(r, 2) = std::cos(xs[i] / beta2);
    A(r, 3) = std::sin(xs[i] / beta2);
    rhs(r) = vs[i];
  }
  const Eigen::Vector4d c = A.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1), c(2), c(3)};
}

Construction none(std::string reason) {
  Construction c;
  c.outcome = Outcome::kNoBoundedSolution;
  c.reason = std::move(reason);
  return c;
}

Construction bounded(TrigProfile p) {
  Construction c;
  c.outcome = Outcome::kBounded;
  c.profile = std::move(p);
  return c;
}

void need(const InitialSamples& s, std::size_t n) {
  if (s.values.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " initial samples, got " +
                          std::to_string(s.values.size()));
  }
}

}  // namespace

Construction construct_profile(const RootStructure& rs, const ConstraintCoefficients& cc,
                               const InitialSamples& samples) {
  switch (rs.tag) {
    case CaseTag::kIaZeroRoot: {
      if (!(cc.b2 * cc.b10 > 0.0)) return none("exponential modes: only constants stay bounded");
      need(samples, 3);
      const double k = std::sqrt(cc.b2 / cc.b10);
      const double v0 = samples.values[0], vh = samples.values[1], vp = samples.values[2];
      const double c1 = (v0 + vp) / 2.0;
      const double c3 = (v0 - vp) / 2.0;
      const double c4 = vh - c1;
      return bounded(TrigProfile({cos_term(c3, k), sin_term(c4, k)}, c1));
    }
    case CaseTag::kIbBothPositive:
      return none("two positive roots: solutions blow up at infinity or are trivial");
    case CaseTag::kIcOppositeSigns: {
      need(samples, 2);
      const double k = std::sqrt(-negative_root(cc));
      return bounded(TrigProfile({cos_term(samples.values[0], k), sin_term(samples.values[1], k)}));
    }
    case CaseTag::kIdBothNegative: {
      need(samples, 4);
      try {
        DerivedQuantities dq = derived_quantities(cc, samples);
        Construction c = bounded(two_frequency_profile(dq.beta1, dq.beta2, dq.c));
        if (!dq.verbatim_agrees) {
          std::ostringstream os;
          os.precision(3);
          os << "closed-form c_i disagree with the interpolation solve (relative "
             << dq.verbatim_discrepancy << ", condition " << dq.condition_number
             << "); solve used";
          c.warnings.push_back(os.str());
        }
        c.derived = dq;
        return c;
      } catch (const Error& e) {
        if (samples.aux_values.size() < 1) throw;
        const Betas b = betas(cc);
        Construction c = bounded(two_frequency_profile(b.beta1, b.beta2,
                                                       fit_augmented(b.beta1, b.beta2, samples)));
        c.warnings.push_back(std::string(e.what()) +
                             "; coefficients fitted on auxiliary samples instead");
        return c;
      }
    }
    case CaseTag::kIIaPositiveDouble:
      return none("positive double root: solutions blow up at infinity or are trivial");
    case CaseTag::kIIbZeroQuadruple:
      return none("quadruple zero root: polynomial solutions, only constants stay bounded");
    case CaseTag::kIIcNegativeDouble: {
      need(samples, 2);
      const double w = std::sqrt(cc.b2 / (2.0 * cc.b10));
      return bounded(TrigProfile({cos_term(samples.values[0], w), sin_term(samples.values[1], w)}));
    }
    case CaseTag::kIIIComplexPair:
      return none("complex roots: no physically relevant nontrivial solution");
    case CaseTag::kDegenerateB10Zero: {
      if (!(cc.b1 * cc.b2 > 0.0)) {
        return none(cc.b1 == 0.0 ? "linear solutions: only constants stay bounded"
                                 : "real exponential modes: solutions blow up at infinity");
      }
      need(samples, 2);
      const double k = std::sqrt(cc.b1 / cc.b2);
      return bounded(TrigProfile({cos_term(samples.values[0], k), sin_term(samples.values[1], k)}));
    }
    case CaseTag::kTrivialOnly:
      return none("b2 = b10 = 0 forces g = 0");
  }
  return none("unhandled case");
}

SymmetryVerdict is_symmetric_trig(const TrigProfile& profile) {
  auto hs = profile.harmonics();
  double rmax = 0.0;
  for (const auto& h : hs) rmax = std::max(rmax, h.amplitude());
  hs.erase(std::remove_if(hs.begin(), hs.end(),
                          [&](const Harmonic& h) { return !(h.amplitude() > 1e-12 * rmax); }),
           hs.end());
  if (hs.size() > 2) throw Unsupported("symmetry test covers at most two frequencies");
  SymmetryVerdict out;
  if (hs.empty()) {
    out.symmetric = true;
    out.axis = 0.0;
    out.method = "single";
    return out;
  }
  if (hs.size() == 1) {
    const double f = hs[0].frequency;
    out.symmetric = true;
    out.axis = wrap_mod(hs[0].phase() / f, kPi / f);
    out.method = "single";
    return out;
  }
  const double f1 = hs[0].frequency, f2 = hs[1].frequency;
  const double phi1 = hs[0].phase(), phi2 = hs[1].phase();
  if (auto r = rational_approx(f2 / f1, 1000, 1e-12)) {
    const long k2 = r->first, k1 = r->second;
    const double f0 = f1 / static_cast<double>(k1);
    // In x = f0 y: r1 cos(k1 (x + t1)) + r2 cos(k2 (x + t2)), t = -phi/k.
    const double t1 = -phi1 / static_cast<double>(k1);
    const double t2 = -phi2 / static_cast<double>(k2);
    const double kk = static_cast<double>(k1 * k2);
    const double q = (t1 - t2) * kk / kPi;
    out.method = "commensurate";
    out.symmetric = std::abs(q - std::round(q)) <= 1e-12 * std::max(1.0, std::abs(q));
    if (out.symmetric) {
      // Axis x* with k1 (x* + t1) and k2 (x* + t2) both in pi Z.
      double best = 0.0, best_d = 1e300;
      for (long j = 0; j < 2 * k1 * k2 + 2; ++j) {
        const double x = -t1 + static_cast<double>(j) * kPi / static_cast<double>(k1);
        const double d = dist_to_lattice(static_cast<double>(k2) * (x + t2), kPi);
        if (d < best_d) { best_d = d; best = x; }
      }
      out.axis = wrap_mod(best / f0, kPi / f0);
    }
    return out;
  }
  // Incommensurate: test the axes of the slower component on a long window.
  out.method = "numerical";
  const double window = 20.0 * std::max(2.0 * kPi / f1, 2.0 * kPi / f2);
  double rms = 0.0;
  const int ns = 4096;
  for (int i = 0; i < ns; ++i) {
    const double y = window * i / ns;
    rms += profile(y) * profile(y) - 2.0 * profile.offset() * profile(y) +
           profile.offset() * profile.offset();
  }
  rms = std::sqrt(rms / ns);
  out.symmetric = false;
  double best_axis = 0.0, best_def = 1e300;
  const int nax = static_cast<int>(std::ceil(window * f1 / kPi)) + 1;
  for (int j = 0; j < nax; ++j) {
    const double a = phi1 / f1 + j * kPi / f1;
    double s = 0.0;
    for (int i = 0; i < ns; ++i) {
      const double y = window * i / ns;
      const double d = profile(a + y) - profile(a - y);
      s += d * d;
    }
    const double def = std::sqrt(s / ns) / (rms > 0.0 ? rms : 1.0);
    if (def < best_def) { best_def = def; best_axis = a; }
  }
  if (best_def < 1e-8) {
    out.symmetric = true;
    out.axis = best_axis;
  }
  return out;
}

SetAResult in_set_A(const ConstraintCoefficients& cc, const InitialSamples& samples) {
  SetAResult r;
  r.derived = derived_quantities(cc, samples);
  const auto& c = r.derived.c;
  double cmax = 0.0;
  for (double x : c) cmax = std::max(cmax, std::abs(x));
  const double tol = 1e-12 * cmax;
  const bool both = r.derived.r1 > tol && r.derived.r2 > tol;
  const double d = r.derived.thetabar1 - r.derived.thetabar2;
  r.member = both && dist_to_lattice(d, kPi) > 1e-10;
  return r;
}

SubcaseReport match_subcase(const DerivedQuantities& dq, const InitialSamples& samples) {
  SubcaseReport rep;
  rep.label = "none";
  if (samples.values.size() != 4) return rep;
  const auto& c = dq.c;
  double cmax = 0.0;
  for (double x : c) cmax = std::max(cmax, std::abs(x));
  const double tol = 1e-12 * cmax;
  const bool z1 = std::abs(c[0]) <= tol, z2 = std::abs(c[1]) <= tol;
  const bool z3 = std::abs(c[2]) <= tol, z4 = std::abs(c[3]) <= tol;
  const double s1 = std::sin(kPi / 2 * dq.alpha1), co1 = std::cos(kPi / 2 * dq.alpha1);
  const double s2 = std::sin(kPi / 2 * dq.alpha2), co2 = std::cos(kPi / 2 * dq.alpha2);
  const double V0 = samples.values[0], Vb1 = samples.values[1], Vb2 = samples.values[2];
  auto G = [](double x) -> double { return x > 0.0 ? 0.0 : (x < 0.0 ? 1.0 : -1.0); };
  auto in_piZ = [](double x) { return dist_to_lattice(x, kPi) <= 1e-10; };
  auto in_Z = [](double x) { return dist_to_lattice(x, 1.0) <= 1e-10; };
  std::array<double, 4> f{};
  const double b1 = dq.beta1, b2 = dq.beta2;
  if (!z1 && !z2 && !z3 && !z4) {
    rep.label = "a";
    f = dq.c_verbatim;
    rep.lattice_condition_k0 = in_piZ(dq.thetabar1 - dq.thetabar2);
  } else if (z1 && !z2 && !z3 && !z4) {
    rep.label = "b";
    const double den = s1 * s2 - 1.0;
    f = {0.0, (Vb2 * s1 + V0 * co1) / den, V0, (s2 * (Vb1 - V0 * co1) - Vb2) / den};
    rep.lattice_condition_k0 = in_piZ((kPi / 2) / b2 - dq.thetabar2);
  } else if (!z1 && z2 && !z3 && !z4) {
    rep.label = "c";
    f = {(Vb2 * s1 - Vb1) / (s1 * co2), 0.0, ((V0 * co2 - Vb1) * s1 + Vb1) / (s1 * co2), Vb1 / s1};
    rep.lattice_condition_k0 = in_piZ(G(c[0]) * kPi / b2 - dq.thetabar2);
  } else if (!z1 && !z2 && z3 && !z4) {
    rep.label = "d";
    const double den = s2 * s1 - 1.0;
    f = {V0, (s1 * (Vb2 - V0 * co2) - Vb1) / den, 0.0, (Vb1 * s2 + V0 * co2) / den};
    rep.lattice_condition_k0 = in_piZ(dq.thetabar1 - (kPi / 2) / b1);
  } else if (!z1 && !z2 && !z3 && z4) {
    rep.label = "e";
    f = {((V0 * co1 - Vb2) * s2 + Vb2) / (s2 * co1), Vb2 / s2, (Vb1 * s2 - Vb2) / (s2 * co1), 0.0};
    rep.lattice_condition_k0 = in_piZ(dq.thetabar1 - G(c[2]) * kPi / b1);
  } else if (!z1 && z2 && !z3 && z4) {
    rep.label = "f";
    f = {Vb2 / co2, 0.0, Vb1 / co1, 0.0};
    rep.lattice_condition_k0 = in_Z(G(c[0]) / b2 - G(c[2]) / b1);
  } else if (!z1 && z2 && z3 && !z4) {
    rep.label = "g";
    f = {V0, 0.0, 0.0, Vb1 / s1};
    rep.lattice_condition_k0 = in_Z(G(c[0]) / b2 - 0.5 / b1);
  } else if (z1 && !z2 && !z3 && z4) {
    rep.label = "h";
    f = {0.0, Vb2 / s2, V0, 0.0};
    rep.lattice_condition_k0 = in_Z(0.5 / b2 - G(c[2]) / b1);
  } else if (z1 && !z2 && z3 && !z4) {
    rep.label = "i";
    const double den = s2 * s1 - 1.0;
    f = {0.0, (Vb2 * s1 - Vb1) / den, 0.0, (Vb1 * s2 - Vb2) / den};
    rep.lattice_condition_k0 = true;
  } else {
    return rep;
  }
  rep.formula_c = f;
  double diff = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(f[i])) { diff = 1e300; break; }
    diff = std::max(diff, std::abs(f[i] - c[i]));
  }
  rep.formula_agrees = diff <= 1e-8 * std::max(cmax, 1e-300);
  return rep;
}

double ode_residual(const TrigProfile& g, const ConstraintCoefficients& cc) {
  const double fmin = g.min_frequency();
  if (fmin == 0.0) return std::abs(cc.b1 * g.offset()) / (cc.norm() * std::max(1e-300, std::abs(g.offset())));
  const double span = 2.0 * kPi / fmin;
  const int n = 1000;
  double res = 0.0, sup = std::abs(g.offset());
  for (int i = 0; i < n; ++i) {
    const double y = span * i / n;
    double gv = g.offset(), r = cc.b1 * g.offset();
    for (const auto& t : g.terms()) {
      const double f2 = t.frequency * t.frequency;
      const double sym = cc.b1 - cc.b2 * f2 + cc.b10 * f2 * f2;
      double basis = 0.0;
      switch (t.kind) {
        case TermKind::kCos: basis = std::cos(t.frequency * y); break;
        case TermKind::kSin: basis = std::sin(t.frequency * y); break;
        case TermKind::kPhase: basis = std::cos(t.frequency * y - t.phase); break;
      }
      gv += t.amplitude * basis;
      r += sym * t.amplitude * basis;
    }
    res = std::max(res, std::abs(r));
    sup = std::max(sup, std::abs(gv));
  }
  if (sup == 0.0) return 0.0;
  return res / (cc.norm() * sup);
}

double interpolation_error(const TrigProfile& g, const InitialSamples& samples) {
  double e = 0.0;
  for (std::size_t i = 0; i < samples.abscissae.size(); ++i) {
    e = std::max(e, std::abs(g(samples.abscissae[i]) - samples.values[i]));
  }
  return e;
}

bool Classification::bounded() const {
  return construction.outcome != Outcome::kNoBoundedSolution;
}

bool Classification::symmetric() const {
  return construction.outcome == Outcome::kBounded && (!symmetry || symmetry->symmetric);
}

Classification classify(const ConstraintCoefficients& cc,
                        const std::function<double(double)>& v0) {
  Classification c;
  c.cc = cc;
  c.roots = classify_roots(cc);
  c.condition = condition_check(cc);
  c.samples = make_samples(c.roots, cc, v0);
  c.construction = construct_profile(c.roots, cc, c.samples);
  c.warnings = c.roots.warnings;
  c.warnings.insert(c.warnings.end(), c.construction.warnings.begin(),
                    c.construction.warnings.end());
  if (c.construction.profile) {
    c.symmetry = is_symmetric_trig(*c.construction.profile);
    if (!c.symmetry->symmetric) c.construction.outcome = Outcome::kAsymmetricOnly;
    if (c.construction.derived) {
      c.subcase = match_subcase(*c.construction.derived, c.samples);
      const auto& dq = *c.construction.derived;
      double cmax = 0.0;
      for (double x : dq.c) cmax = std::max(cmax, std::abs(x));
      const bool both = dq.r1 > 1e-12 * cmax && dq.r2 > 1e-12 * cmax;
      c.in_set_A = both && dist_to_lattice(dq.thetabar1 - dq.thetabar2, kPi) > 1e-10;
      if (dq.arccos_phase_mismatch) {
        c.warnings.push_back("arccos phase convention loses the sine sign; signed phases used");
      }
    }
  }
  return c;
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j;
  j["case_tag"] = to_string(c.roots.tag);
  j["condition"] = to_string(c.condition);
  j["bounded"] = c.bounded();
  j["symmetric"] = c.symmetric();
  j["outcome"] = to_string(c.construction.outcome);
  j["reason"] = c.construction.reason;
  j["profile"] = c.construction.profile ? to_json(*c.construction.profile) : nlohmann::json();
  if (c.construction.derived) {
    const auto& d = *c.construction.derived;
    j["derived"] = {{"alpha1", d.alpha1},
                    {"alpha2", d.alpha2},
                    {"beta1", d.beta1},
                    {"beta2", d.beta2},
                    {"theta1", d.theta1},
                    {"theta2", d.theta2},
                    {"c", d.c},
                    {"c0", d.c0},
                    {"c_tilde", d.c_tilde},
                    {"c_verbatim", d.c_verbatim},
                    {"verbatim_agrees", d.verbatim_agrees},
                    {"condition_number", d.condition_number},
                    {"thetabar1", d.thetabar1},
                    {"thetabar2", d.thetabar2}};
  } else {
    j["derived"] = nullptr;
  }
  if (c.in_set_A) j["in_set_A"] = *c.in_set_A;
  if (c.subcase) {
    j["subcase"] = {{"label", c.subcase->label},
                    {"formula_c", c.subcase->formula_c},
                    {"formula_agrees", c.subcase->formula_agrees},
                    {"lattice_condition_k0", c.subcase->lattice_condition_k0}};
  }
  if (c.symmetry) {
    j["symmetry"] = {{"symmetric", c.symmetry->symmetric},
                     {"method", c.symmetry->method},
                     {"axis", c.symmetry->axis ? nlohmann::json(*c.symmetry->axis) : nlohmann::json()}};
  }
  j["samples"] = {{"abscissae", c.samples.abscissae}, {"values", c.samples.values}};
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& z : c.roots.z_roots) roots.push_back({z.real(), z.imag()});
  j["z_roots"] = roots;
  j["discriminant"] = c.roots.discriminant;
  j["warnings"] = c.warnings;
  return j;
}

}  // namespace steadylab
