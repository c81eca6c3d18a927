#include "steadylab/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "steadylab/errors.hpp"

namespace steadylab {
namespace {

using Key = std::pair<int, Basis>;
using Terms = std::map<Key, double>;

// Effective a5 in the published expansions: a5 (n-1) there plays the role
// of a5 n in an honest derivative of v^n.
double a5_effective(const PerturbedParams& p, NonlinearFactor f) {
  if (f == NonlinearFactor::kPaperVerbatim) return p.a5;
  return p.a5 * static_cast<double>(p.n) / static_cast<double>(p.n - 1);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Harmonics of (g^q)' for g = c3 cos + c4 sin, added into `out` with weight w.
void add_power_derivative(Terms& out, int q, double c3, double c4, double omega, double w) {
  if (w == 0.0) return;
  const std::complex<double> C(c3, -c4), Cb(c3, c4);
  const double scale = std::ldexp(1.0, -q);
  for (int k = 0; k <= q; ++k) {
    const int j = 2 * k - q;
    if (j <= 0) continue;
    const std::complex<double> Z = scale * binom(q, k) * std::pow(C, k) * std::pow(Cb, q - k);
    const double P = 2.0 * Z.real(), Q = -2.0 * Z.imag();
    out[{j, Basis::kSin}] += w * (-j * omega * P);
    out[{j, Basis::kCos}] += w * (j * omega * Q);
  }
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

bool low_regime(const PerturbedParams& p) {
  return (p.m == 1 || p.m == 2) && (p.n == 2 || p.n == 3);
}

Terms explicit_low_B(const PerturbedParams& p, double c3, double c4, double w, NonlinearFactor f) {
  const double a5 = a5_effective(p, f), b4 = p.b4;
  const double r2 = c3 * c3 + c4 * c4;
  const double q2s = 0.5 * (c4 * c4 - c3 * c3), q2c = c3 * c4;
  const double t3s = c3 * (3 * c4 * c4 - c3 * c3), t3c = c4 * (3 * c3 * c3 - c4 * c4);
  const double t1s = -c3 * r2, t1c = c4 * r2;
  Terms t;
  auto put = [&](int k, double s, double c) {
    t[{k, Basis::kSin}] += s;
    t[{k, Basis::kCos}] += c;
  };
  if (p.m == 1 && p.n == 2) {
    put(2, w * (a5 - b4) * q2s, w * (a5 - b4) * q2c);
  } else if (p.m == 2 && p.n == 2) {
    put(3, -0.25 * b4 * w * t3s, -0.25 * b4 * w * t3c);
    put(2, a5 * w * q2s, a5 * w * q2c);
    put(1, -0.25 * b4 * w * t1s, -0.25 * b4 * w * t1c);
  } else if (p.m == 1 && p.n == 3) {
    put(3, 0.5 * a5 * w * t3s, 0.5 * a5 * w * t3c);
    put(2, -b4 * w * q2s, -b4 * w * q2c);
    put(1, 0.5 * a5 * w * t1s, 0.5 * a5 * w * t1c);
  } else {
    const double k = 0.25 * w * (2 * a5 - b4);
    put(3, k * t3s, k * t3c);
    put(1, k * t1s, k * t1c);
  }
  return t;
}

double den_of(const PerturbedParams& p, double w) {
  return p.a4 * w * w * w * w - p.a3 * w * w + 1.0;
}

void check_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("omega must be positive and finite");
  }
}

}  // namespace

double FrequencyDecomposition::assembled(int k, Basis b) const {
  const double w3 = omega * omega * omega;
  double v = 0.0;
  const bool s = (b == Basis::kSin);
  if (k == 1) v = omega * (s ? A[0] : A[1]);
  if (k == 2) v = 0.5 * w3 * (s ? A[2] : A[3]);
  if (k == 3) v = 0.25 * w3 * (s ? A[4] : A[5]);
  const auto it = B_terms.find({k, b});
  if (it != B_terms.end()) v += it->second;
  return v;
}

int FrequencyDecomposition::max_multiple() const {
  int k = 3;
  for (const auto& [key, val] : B_terms) k = std::max(k, key.first);
  return k;
}

std::array<double, 6> compute_A(const PerturbedParams& p, double c3, double c4, double omega,
                                double lambda_dot) {
  check_omega(omega);
  const double w2 = omega * omega, w4 = w2 * w2;
  const double r2 = c3 * c3 + c4 * c4;
  const double K = -p.a1 + p.a2 * w2 + p.b11 * w4 + lambda_dot * (-p.a3 * w2 + p.a4 * w4 + 1.0) +
                   0.25 * w2 * (3.0 * p.b7 - p.b6) * r2;
  const double S = p.b3 + p.b5 - (p.b8 + p.b9 + p.b12) * w2;
  return {c3 * K,
          -c4 * K,
          (c4 * c4 - c3 * c3) * S,
          2.0 * c3 * c4 * S,
          c3 * (p.b6 + p.b7) * (3.0 * c4 * c4 - c3 * c3),
          c4 * (p.b6 + p.b7) * (3.0 * c3 * c3 - c4 * c4)};
}

std::map<std::pair<int, Basis>, double> compute_B(const PerturbedParams& p, double c3, double c4,
                                                  double omega, NonlinearFactor f) {
  check_omega(omega);
  p.validate();
  Terms t;
  const double a5w = f == NonlinearFactor::kExact
                         ? p.a5
                         : p.a5 * static_cast<double>(p.n - 1) / static_cast<double>(p.n);
  add_power_derivative(t, p.n, c3, c4, omega, a5w);
  add_power_derivative(t, p.m + 1, c3, c4, omega, -p.b4 / static_cast<double>(p.m + 1));
  return t;
}

std::map<std::pair<int, Basis>, double> compute_B_high(const PerturbedParams& p, double c3,
                                                       double c4, double omega,
                                                       NonlinearFactor f) {
  check_omega(omega);
  Terms t;
  const int n = p.n, m = p.m;
  const double a5 = a5_effective(p, f);
  if (n - m - 1 >= 0) {
    const double P1 = a5 * (n - 1) / std::ldexp(1.0, n - 1) * omega;
    t[{n, Basis::kSin}] += -P1 * ipow(c3, n);
    t[{n, Basis::kCos}] += P1 * ipow(c3, n - 1) * c4;
    const double d1 = -P1 * ipow(c4, n - 1) * c3;
    if (n % 2 == 0) {
      t[{n, Basis::kCos}] += d1 * ((n / 2) % 2 == 0 ? 1.0 : -1.0);
      t[{n, Basis::kSin}] += -P1 * ipow(c4, n);
    } else {
      t[{n, Basis::kSin}] += d1 * (((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
      t[{n, Basis::kCos}] += -P1 * ipow(c4, n);
    }
  }
  if (m - n + 1 >= 0) {
    const int k = m + 1;
    const double P2 = p.b4 / std::ldexp(1.0, m) * omega;
    t[{k, Basis::kSin}] += P2 * ipow(c3, k);
    t[{k, Basis::kCos}] += -P2 * ipow(c3, m) * c4;
    const double d3 = P2 * ipow(c4, m) * c3;
    if (m % 2 == 1) {
      t[{k, Basis::kCos}] += d3 * (((m + 1) / 2) % 2 == 0 ? 1.0 : -1.0);
      t[{k, Basis::kSin}] += P2 * ipow(c4, k);
    } else {
      t[{k, Basis::kSin}] += d3 * ((m / 2) % 2 == 0 ? 1.0 : -1.0);
      t[{k, Basis::kCos}] += P2 * ipow(c4, k);
    }
  }
  return t;
}

FrequencyDecomposition decompose(const PerturbedParams& p, double c3, double c4, double omega,
                                 double lambda_dot, NonlinearFactor f) {
  FrequencyDecomposition d;
  d.omega = omega;
  d.A = compute_A(p, c3, c4, omega, lambda_dot);
  if (low_regime(p)) {
    d.B_terms = explicit_low_B(p, c3, c4, omega, f);
    d.explicit_low = true;
  } else {
    d.B_terms = compute_B(p, c3, c4, omega, f);
  }
  if (p.m >= 3 || p.n >= 4) d.B_high_verbatim = compute_B_high(p, c3, c4, omega, f);
  return d;
}

TrigProfile single_frequency_profile(double c3, double c4, double omega) {
  return TrigProfile({{c3, omega, TermKind::kCos, 0.0}, {c4, omega, TermKind::kSin, 0.0}});
}

ResidualReport nonlinear_residual(const TrigProfile& g, const PerturbedParams& p,
                                  double lambda_dot) {
  p.validate();
  ResidualReport rep;
  double period = 2.0 * std::numbers::pi;
  if (!g.terms().empty() && g.min_frequency() > 0.0) {
    if (auto P = g.common_period()) {
      period = *P;
    } else {
      period = 2.0 * std::numbers::pi / g.min_frequency();
      rep.commensurate = false;
    }
  }
  rep.base_frequency = 2.0 * std::numbers::pi / period;
  constexpr int ns = 4096;
  const double fmax = g.terms().empty() ? 0.0 : g.max_frequency();
  const int K = std::max({p.n, p.m + 1, 3}) *
                std::max(1, static_cast<int>(std::lround(fmax / rep.base_frequency)));
  std::vector<double> r(ns);
  for (int i = 0; i < ns; ++i) {
    const double y = period * i / ns;
    const auto d = g.derivatives(y, 5);
    const double v = d[0], v1 = d[1], v2 = d[2], v3 = d[3], v4 = d[4], v5 = d[5];
    const double rhs = p.a1 * v1 + p.a2 * v3 + p.a5 * p.n * std::pow(v, p.n - 1) * v1 -
                       p.b3 * v1 * v2 - p.b4 * std::pow(v, p.m) * v1 - p.b5 * v * v3 -
                       p.b6 * v * v1 * v2 - p.b7 * v1 * v1 * v1 - p.b8 * v1 * v4 -
                       p.b9 * v2 * v3 - p.b11 * v5 - p.b12 * v * v5;
    const double lhs = lambda_dot * (v1 + p.a3 * v3 + p.a4 * v5);
    r[static_cast<std::size_t>(i)] = rhs - lhs;
    rep.max = std::max(rep.max, std::abs(rhs - lhs));
  }
  static const auto table = [] {
    std::vector<std::pair<double, double>> t(ns);
    for (int i = 0; i < ns; ++i) {
      const double th = 2.0 * std::numbers::pi * i / ns;
      t[static_cast<std::size_t>(i)] = {std::sin(th), std::cos(th)};
    }
    return t;
  }();
  for (int k = 0; k <= K; ++k) {
    double s = 0.0, c = 0.0;
    for (int i = 0; i < ns; ++i) {
      const auto& [sn, cs] = table[static_cast<std::size_t>((static_cast<long>(k) * i) % ns)];
      s += r[static_cast<std::size_t>(i)] * sn;
      c += r[static_cast<std::size_t>(i)] * cs;
    }
    if (k == 0) rep.per_frequency[0] = {0.0, c / ns};
    else rep.per_frequency[k] = {2.0 * s / ns, 2.0 * c / ns};
  }
  return rep;
}

double tolerance_scale(const PerturbedParams& p, double c3, double c4, double omega) {
  double s = std::max({1.0, std::abs(c3), std::abs(c4), omega * omega * omega * omega});
  for (double a : p.a_coeffs()) s = std::max(s, std::abs(a));
  for (double b : p.b_coeffs()) s = std::max(s, std::abs(b));
  return s;
}

double solve_lambda_dot(const PerturbedParams& p, double c3, double c4, double omega,
                        NonlinearFactor f) {
  check_omega(omega);
  const double den = den_of(p, omega);
  const double dscale = std::max({1.0, std::abs(p.a4) * std::pow(omega, 4),
                                  std::abs(p.a3) * omega * omega});
  if (std::abs(den) <= 1e-14 * dscale) {
    throw IndeterminateSpeed("a4 w^4 - a3 w^2 + 1 vanishes; the frequency-one equations do not fix the speed");
  }
  if (c3 == 0.0 && c4 == 0.0) {
    throw IndeterminateSpeed("zero profile: any speed is consistent");
  }
  const FrequencyDecomposition d0 = decompose(p, c3, c4, omega, 0.0, f);
  const double es = d0.assembled(1, Basis::kSin), ec = d0.assembled(1, Basis::kCos);
  const double ks = omega * c3 * den, kc = -omega * c4 * den;
  return -(es * ks + ec * kc) / (ks * ks + kc * kc);
}

double wave_speed(const PerturbedParams& p, double c3, double c4, double omega) {
  check_omega(omega);
  const double r2 = c3 * c3 + c4 * c4;
  if (r2 == 0.0) throw IndeterminateSpeed("wave speed needs c3^2 + c4^2 != 0");
  const double den = den_of(p, omega);
  if (den == 0.0) throw IndeterminateSpeed("wave speed denominator a4 w^4 - a3 w^2 + 1 is zero");
  const double w2 = omega * omega;
  return (0.25 * w2 * (p.b6 - 3.0 * p.b7) * r2 + p.a1 - p.a2 * w2 - p.b11 * w2 * w2) / den;
}

AdmissibilityReport check_conditions(const PerturbedParams& p, double c3, double c4, double omega,
                                     std::optional<double> lambda_dot, NonlinearFactor f) {
  p.validate();
  check_omega(omega);
  for (double c : {c3, c4}) {
    if (!std::isfinite(c)) throw InvalidArgument("profile coefficients must be finite");
  }
  AdmissibilityReport rep;
  const double r2 = c3 * c3 + c4 * c4;
  if (lambda_dot) {
    rep.lambda_dot = *lambda_dot;
  } else if (r2 == 0.0) {
    rep.lambda_dot = 0.0;
    rep.warnings.push_back("zero profile: speed undetermined, lambda_dot set to 0");
  } else {
    rep.lambda_dot = solve_lambda_dot(p, c3, c4, omega, f);
    rep.lambda_dot_solved = true;
  }
  if (r2 != 0.0 && den_of(p, omega) != 0.0) rep.wave_speed = wave_speed(p, c3, c4, omega);
  rep.scale = tolerance_scale(p, c3, c4, omega);
  const double w2 = omega * omega;
  rep.linear_constraint = p.b1 - p.b2 * w2 + p.b10 * w2 * w2;
  if (std::abs(rep.linear_constraint) > 1e-10 * rep.scale) {
    rep.warnings.push_back("profile does not satisfy b1 g + b2 g'' + b10 g'''' = 0");
  }

  const auto A = compute_A(p, c3, c4, omega, rep.lambda_dot);
  const double a5 = a5_effective(p, f), b4 = p.b4;
  const double tol = 1e-10 * rep.scale;
  auto eq = [&](std::string name, double lhs, double rhs = 0.0) {
    rep.equations.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs) <= tol});
  };
  auto all_A = [&] {
    for (int i = 0; i < 6; ++i) eq("A" + std::to_string(i + 1) + " = 0", A[static_cast<std::size_t>(i)]);
  };
  const int m = p.m, n = p.n;
  const double c3c4 = c3 * c4, d34 = c4 * c4 - c3 * c3;
  const double t5 = c3 * (3 * c4 * c4 - c3 * c3), t6 = c4 * (3 * c3 * c3 - c4 * c4);
  if (m >= 3 && n >= 4 && m != n - 1) {
    rep.case_label = "1";
    eq("a5 = 0", p.a5);
    eq("b4 = 0", b4);
    all_A();
  } else if (n >= 4 && m == n - 1) {
    rep.case_label = "2";
    eq("a5(n-1) = b4", a5 * (n - 1), b4);
    all_A();
  } else if (m == 1 && n == 2) {
    rep.case_label = "3";
    eq("A1 = 0", A[0]);
    eq("A2 = 0", A[1]);
    eq("(a5-b4)(c4^2-c3^2) + w^2 A3 = 0", (a5 - b4) * d34 + w2 * A[2]);
    eq("2(a5-b4)c3c4 + w^2 A4 = 0", 2 * (a5 - b4) * c3c4 + w2 * A[3]);
    eq("A5 = 0", A[4]);
    eq("A6 = 0", A[5]);
  } else if (m == 2 && n == 2) {
    rep.case_label = "4";
    eq("4A1 + b4 c3 (c3^2+c4^2) = 0", 4 * A[0] + b4 * c3 * r2);
    eq("4A2 - b4 c4 (c3^2+c4^2) = 0", 4 * A[1] - b4 * c4 * r2);
    eq("w^2 A3 + a5 (c4^2-c3^2) = 0", w2 * A[2] + a5 * d34);
    eq("w^2 A4 + 2 a5 c3 c4 = 0", w2 * A[3] + 2 * a5 * c3c4);
    eq("w^2 A5 - b4 c3 (3c4^2-c3^2) = 0", w2 * A[4] - b4 * t5);
    eq("w^2 A6 - b4 c4 (3c3^2-c4^2) = 0", w2 * A[5] - b4 * t6);
  } else if (m == 1 && n == 3) {
    rep.case_label = "5";
    eq("2A1 - a5 c3 (c3^2+c4^2) = 0", 2 * A[0] - a5 * c3 * r2);
    eq("2A2 + a5 c4 (c3^2+c4^2) = 0", 2 * A[1] + a5 * c4 * r2);
    eq("w^2 A3 - b4 (c4^2-c3^2) = 0", w2 * A[2] - b4 * d34);
    eq("w^2 A4 - 2 b4 c3 c4 = 0", w2 * A[3] - 2 * b4 * c3c4);
    eq("w^2 A5 + 2 a5 c3 (3c4^2-c3^2) = 0", w2 * A[4] + 2 * a5 * t5);
    eq("w^2 A6 + 2 a5 c4 (3c3^2-c4^2) = 0", w2 * A[5] + 2 * a5 * t6);
  } else if (m == 2 && n == 3) {
    rep.case_label = "6";
    const double k = 2 * a5 - b4;
    eq("4A1 - c3 (2a5-b4)(c3^2+c4^2) = 0", 4 * A[0] - c3 * k * r2);
    eq("4A2 + c4 (2a5-b4)(c3^2+c4^2) = 0", 4 * A[1] + c4 * k * r2);
    eq("A3 = 0", A[2]);
    eq("A4 = 0", A[3]);
    eq("w^2 A5 + c3 (2a5-b4)(3c4^2-c3^2) = 0", w2 * A[4] + c3 * k * (3 * c4 * c4 - c3 * c3));
    eq("w^2 A6 + c4 (2a5-b4)(3c3^2-c4^2) = 0", w2 * A[5] + c4 * k * (3 * c3 * c3 - c4 * c4));
  } else {
    rep.case_label = "outside_enumerated";
    rep.enumerated = false;
    rep.warnings.push_back("(m,n) outside enumerated cases; verdict from the direct residual");
    const FrequencyDecomposition d = decompose(p, c3, c4, omega, rep.lambda_dot, f);
    for (int k = 1; k <= d.max_multiple(); ++k) {
      eq("sin(" + std::to_string(k) + " w y) coefficient = 0", d.assembled(k, Basis::kSin));
      eq("cos(" + std::to_string(k) + " w y) coefficient = 0", d.assembled(k, Basis::kCos));
    }
  }
  rep.residual = nonlinear_residual(single_frequency_profile(c3, c4, omega), p, rep.lambda_dot);
  if (rep.enumerated) {
    rep.satisfied = std::all_of(rep.equations.begin(), rep.equations.end(),
                                [](const EquationCheck& e) { return e.satisfied; });
  } else {
    rep.satisfied = rep.residual.max < 1e-8 * rep.scale;
  }
  return rep;
}

nlohmann::json to_json(const AdmissibilityReport& r) {
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : r.equations) {
    eqs.push_back({{"name", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"satisfied", e.satisfied}});
  }
  nlohmann::json pf = nlohmann::json::array();
  for (const auto& [k, sc] : r.residual.per_frequency) {
    pf.push_back({{"k", k}, {"sin", sc.first}, {"cos", sc.second}});
  }
  return {{"case", r.case_label},
          {"enumerated", r.enumerated},
          {"equations", eqs},
          {"satisfied", r.satisfied},
          {"lambda_dot", r.lambda_dot},
          {"lambda_dot_solved", r.lambda_dot_solved},
          {"wave_speed", r.wave_speed ? nlohmann::json(*r.wave_speed) : nlohmann::json()},
          {"scale", r.scale},
          {"linear_constraint", r.linear_constraint},
          {"residual",
           {{"max", r.residual.max},
            {"base_frequency", r.residual.base_frequency},
            {"per_frequency", pf}}},
          {"warnings", r.warnings}};
}

}  // namespace steadylab
