#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "steadylab/grid.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Sum of the lowest `modes` Fourier modes with random coefficients decaying
// like exp(-k/decay), so the result is smooth and exactly band-limited.
inline steadylab::Field random_band_limited(const steadylab::Grid& g, std::uint64_t seed,
                                            int modes = 8, double decay = 3.0,
                                            double mean = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(modes) + 1), b(a.size());
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double s = std::exp(-static_cast<double>(k) / decay);
    a[k] = s * nd(rng);
    b[k] = s * nd(rng);
  }
  return steadylab::Field::sample(g, [&](double x) {
    double v = mean;
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double th = 2.0 * kPi * static_cast<double>(k) * x / g.length();
      v += a[k] * std::cos(th) + b[k] * std::sin(th);
    }
    return v;
  });
}

// Even about `axis`: cosine series in (x - axis).
inline steadylab::Field random_symmetric(const steadylab::Grid& g, std::uint64_t seed,
                                         double axis, int modes = 8) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(modes) + 1);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::exp(-static_cast<double>(k) / 3.0) * nd(rng);
  return steadylab::Field::sample(g, [&](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      v += a[k] * std::cos(2.0 * kPi * static_cast<double>(k) * (x - axis) / g.length());
    }
    return v;
  });
}

inline double sech2(double x) {
  const double c = 1.0 / std::cosh(x);
  return c * c;
}

}  // namespace testing

#include "steadylab/admissibility.hpp"
#include "steadylab/params.hpp"

namespace testing {

// Perturbed coefficients for which g = c3 cos(w y) + c4 sin(w y) is an
// exact traveling solution. The linear part is b10 (xi^2 - w^2)^2 with
// b10 < 0, so every other mode decays and the dynamics stay tame.
struct AdmissibleSetup {
  steadylab::PerturbedParams p;
  double c3 = 0.3, c4 = 0.2, omega = 1.0;
  double speed = 0.0;
};

inline AdmissibleSetup make_admissible(int m, int n, double omega = 1.0, double c3 = 0.3,
                                       double c4 = 0.2) {
  AdmissibleSetup s;
  s.omega = omega;
  s.c3 = c3;
  s.c4 = c4;
  auto& p = s.p;
  p.m = m;
  p.n = n;
  p.a1 = 1.0;
  p.a2 = 0.2;
  p.a3 = -0.5;
  p.a4 = 0.1;
  p.b10 = -0.1;
  p.b2 = 2.0 * p.b10 * omega * omega;
  p.b1 = p.b10 * omega * omega * omega * omega;
  p.b11 = 0.05;
  p.b3 = 0.1;
  p.b8 = 0.02;
  p.b9 = -0.03;
  p.b12 = 0.01;
  p.b6 = 0.1;
  const double w2 = omega * omega;
  double S = 0.0, b67 = 0.0;  // target b3+b5-(b8+b9+b12)w^2 and b6+b7
  const double a5 = 0.1;
  const double a5e = a5 * n / (n - 1.0);
  if (m == 1 && n == 2) {
    p.a5 = a5; p.b4 = 0.05;
    S = -(a5e - p.b4) / w2;
  } else if (m == 2 && n == 2) {
    p.a5 = a5; p.b4 = 0.05;
    S = -a5e / w2;
    b67 = p.b4 / w2;
  } else if (m == 1 && n == 3) {
    p.a5 = a5; p.b4 = 0.05;
    S = p.b4 / w2;
    b67 = -2.0 * a5e / w2;
  } else if (m == 2 && n == 3) {
    p.a5 = a5; p.b4 = 0.05;
    b67 = -(2.0 * a5e - p.b4) / w2;
  } else if (m == n - 1) {
    p.a5 = a5; p.b4 = a5 * n;
  } else {
    p.a5 = 0.0; p.b4 = 0.0;
  }
  p.b5 = S - p.b3 + (p.b8 + p.b9 + p.b12) * w2;
  p.b7 = b67 - p.b6;
  s.speed = steadylab::solve_lambda_dot(p, c3, c4, omega);
  return s;
}

}  // namespace testing
