#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "steadylab/admissibility.hpp"
#include "steadylab/errors.hpp"

using namespace steadylab;
using testing::kPi;

namespace {

// Random coefficients pushed onto the admissible set for (m, n); with
// `admissible` false they are left generic.
struct Draw {
  PerturbedParams p;
  double c3, c4, omega;
};

Draw draw(int m, int n, std::mt19937_64& rng, bool admissible) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Draw d;
  auto& p = d.p;
  p.m = m;
  p.n = n;
  d.omega = 0.5 + std::abs(u(rng));
  d.c3 = u(rng);
  d.c4 = u(rng);
  p.a1 = u(rng); p.a2 = u(rng); p.a3 = -std::abs(u(rng)); p.a4 = std::abs(u(rng));
  p.a5 = u(rng);
  p.b3 = u(rng); p.b4 = u(rng); p.b5 = u(rng); p.b6 = u(rng); p.b7 = u(rng); p.b8 = u(rng);
  p.b9 = u(rng); p.b11 = u(rng); p.b12 = u(rng);
  p.b10 = -std::abs(u(rng)) - 0.1;
  const double w2 = d.omega * d.omega;
  p.b2 = 2.0 * p.b10 * w2;
  p.b1 = p.b10 * w2 * w2;
  if (!admissible) return d;
  const double a5e = p.a5 * n / (n - 1.0);
  double S = 0.0, b67 = 0.0;
  if (m == 1 && n == 2) {
    S = -(a5e - p.b4) / w2;
  } else if (m == 2 && n == 2) {
    S = -a5e / w2;
    b67 = p.b4 / w2;
  } else if (m == 1 && n == 3) {
    S = p.b4 / w2;
    b67 = -2.0 * a5e / w2;
  } else if (m == 2 && n == 3) {
    b67 = -(2.0 * a5e - p.b4) / w2;
  } else if (m == n - 1) {
    p.b4 = p.a5 * n;
  } else {
    p.a5 = 0.0;
    p.b4 = 0.0;
  }
  p.b5 = S - p.b3 + (p.b8 + p.b9 + p.b12) * w2;
  p.b7 = b67 - p.b6;
  return d;
}

double oracle_max(const Draw& d, double lambda_dot) {
  return nonlinear_residual(single_frequency_profile(d.c3, d.c4, d.omega), d.p, lambda_dot).max;
}

}  // namespace

TEST_CASE("A coefficient examples") {
  const auto s = testing::make_admissible(1, 2);
  for (double a : compute_A(s.p, 0.0, 0.0, 1.3, 0.7)) CHECK(a == 0.0);

  PerturbedParams p = s.p;
  const double w = 1.3;
  p.b5 = (p.b8 + p.b9 + p.b12) * w * w - p.b3;
  auto A = compute_A(p, 0.4, -0.2, w, 0.9);
  CHECK(std::abs(A[2]) < 1e-15);
  CHECK(std::abs(A[3]) < 1e-15);
  p.b7 = -p.b6;
  A = compute_A(p, 0.4, -0.2, w, 0.9);
  CHECK(std::abs(A[4]) < 1e-15);
  CHECK(std::abs(A[5]) < 1e-15);

  // shared factors
  p = testing::make_admissible(2, 3).p;
  p.b5 += 0.3;
  p.b7 += 0.2;
  const double c3 = 0.7, c4 = -0.4;
  A = compute_A(p, c3, c4, w, 0.1);
  CHECK(A[2] * 2 * c3 * c4 == doctest::Approx(A[3] * (c4 * c4 - c3 * c3)));
  CHECK(A[4] / c3 / (3 * c4 * c4 - c3 * c3) == doctest::Approx(A[5] / c4 / (3 * c3 * c3 - c4 * c4)));
}

TEST_CASE("B vanishes on the stated coefficient relations") {
  PerturbedParams p;
  p.m = 1; p.n = 2; p.a5 = 0.3; p.b4 = 0.3;
  for (const auto& [key, v] : compute_B(p, 0.4, 0.7, 1.1, NonlinearFactor::kPaperVerbatim)) CHECK(v == 0.0);
  p.b4 = 0.6;  // exact derivative of v^2 carries the factor 2
  for (const auto& [key, v] : compute_B(p, 0.4, 0.7, 1.1)) CHECK(std::abs(v) < 1e-15);

  p.m = 2; p.n = 3; p.a5 = 0.25; p.b4 = 0.5;
  for (const auto& [key, v] : compute_B(p, 0.4, 0.7, 1.1, NonlinearFactor::kPaperVerbatim)) {
    CHECK(std::abs(v) < 1e-15);
  }
  p.b4 = 0.75;
  for (const auto& [key, v] : compute_B(p, 0.4, 0.7, 1.1)) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("B harmonic content matches a direct projection") {
  std::mt19937_64 rng(5);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}, {4, 4}, {1, 4}}) {
    const Draw d = draw(m, n, rng, false);
    const double w = d.omega;
    const auto B = compute_B(d.p, d.c3, d.c4, w);
    const int K = std::max(n, m + 1);
    const int ns = 1024;
    for (int k = 0; k <= K + 1; ++k) {
      double s = 0.0, c = 0.0;
      for (int i = 0; i < ns; ++i) {
        const double y = 2 * kPi / w * i / ns;
        const double g = d.c3 * std::cos(w * y) + d.c4 * std::sin(w * y);
        const double g1 = w * (-d.c3 * std::sin(w * y) + d.c4 * std::cos(w * y));
        const double val = d.p.a5 * n * std::pow(g, n - 1) * g1 - d.p.b4 * std::pow(g, m) * g1;
        s += val * std::sin(2 * kPi * k * i / ns);
        c += val * std::cos(2 * kPi * k * i / ns);
      }
      s *= 2.0 / ns;
      c *= 2.0 / ns;
      const auto get = [&](Basis b) {
        const auto it = B.find({k, b});
        return it == B.end() ? 0.0 : it->second;
      };
      CHECK(std::abs(get(Basis::kSin) - s) < 1e-12);
      if (k > 0) CHECK(std::abs(get(Basis::kCos) - c) < 1e-12);
    }
  }
}

TEST_CASE("published top harmonic agrees when one of c3, c4 vanishes") {
  PerturbedParams p;
  p.m = 3; p.n = 4; p.a5 = 0.2; p.b4 = 0.0;
  const auto exact = compute_B(p, 0.8, 0.0, 1.2);
  const auto high = compute_B_high(p, 0.8, 0.0, 1.2);
  REQUIRE_FALSE(high.empty());
  for (const auto& [key, v] : high) {
    const auto it = exact.find(key);
    const double e = it == exact.end() ? 0.0 : it->second;
    CHECK(v == doctest::Approx(e).epsilon(1e-12).scale(1e-12));
  }
  // m = 3, n = 4: both gates open, both terms sit at 4 w
  const auto d = decompose(p, 0.8, 0.0, 1.2, 0.0);
  CHECK(d.max_multiple() == 4);
  CHECK_FALSE(d.explicit_low);
}

TEST_CASE("residual projections equal the assembled coefficients") {
  std::mt19937_64 rng(77);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Draw d = draw(m, n, rng, rep % 2 == 0);
      const double ld = 0.37 * rep - 0.5;
      const auto dec = decompose(d.p, d.c3, d.c4, d.omega, ld);
      const auto res = nonlinear_residual(single_frequency_profile(d.c3, d.c4, d.omega), d.p, ld);
      CHECK(res.base_frequency == doctest::Approx(d.omega));
      for (const auto& [k, sc] : res.per_frequency) {
        if (k == 0) {
          CHECK(std::abs(sc.second) < 1e-10);
          continue;
        }
        CHECK(std::abs(sc.first - dec.assembled(k, Basis::kSin)) < 1e-10);
        CHECK(std::abs(sc.second - dec.assembled(k, Basis::kCos)) < 1e-10);
      }
    }
  }
}

TEST_CASE("verdict agrees with the residual oracle on random draws") {
  std::mt19937_64 rng(31337);
  const auto run = [&](int m, int n, int count) {
    int sat = 0;
    for (int i = 0; i < count; ++i) {
      const Draw d = draw(m, n, rng, i % 2 == 0);
      const auto rep = check_conditions(d.p, d.c3, d.c4, d.omega);
      const bool oracle = oracle_max(d, rep.lambda_dot) < 1e-8 * rep.scale;
      CHECK(rep.satisfied == oracle);
      CHECK(rep.satisfied == (i % 2 == 0));
      if (rep.satisfied) {
        ++sat;
        CHECK(std::abs(rep.linear_constraint) < 1e-10);
      }
    }
    return sat;
  };
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
    CAPTURE(m);
    CAPTURE(n);
    CHECK(run(m, n, 500) == 250);
  }
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 4}, {3, 5}, {4, 5}}) {
    CAPTURE(m);
    CAPTURE(n);
    CHECK(run(m, n, 100) == 50);
  }
}

TEST_CASE("enumerated high cases") {
  std::mt19937_64 rng(8);
  Draw d = draw(3, 5, rng, true);
  auto rep = check_conditions(d.p, d.c3, d.c4, d.omega);
  CHECK(rep.case_label == "1");
  CHECK(rep.satisfied);
  d = draw(3, 4, rng, true);
  rep = check_conditions(d.p, d.c3, d.c4, d.omega);
  CHECK(rep.case_label == "2");
  CHECK(rep.satisfied);
  // the published (n-1) factor calls for a different b4
  const auto verbatim = check_conditions(d.p, d.c3, d.c4, d.omega, std::nullopt, NonlinearFactor::kPaperVerbatim);
  CHECK_FALSE(verbatim.satisfied);
  d.p.b4 = d.p.a5 * 3;
  CHECK(check_conditions(d.p, d.c3, d.c4, d.omega, std::nullopt, NonlinearFactor::kPaperVerbatim).case_label == "2");
}

TEST_CASE("small perturbation of b11 breaks admissibility") {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 5}}) {
    const auto s = testing::make_admissible(m, n);
    const auto ok = check_conditions(s.p, s.c3, s.c4, s.omega);
    REQUIRE(ok.satisfied);
    PerturbedParams q = s.p;
    q.b11 *= 1.01;
    const auto bad = check_conditions(q, s.c3, s.c4, s.omega, ok.lambda_dot);
    CHECK_FALSE(bad.satisfied);
    const auto A = compute_A(q, s.c3, s.c4, s.omega, ok.lambda_dot);
    CHECK(std::abs(A[0]) > 1e-6);
    CHECK(std::abs(A[1]) > 1e-6);
    const auto res = nonlinear_residual(single_frequency_profile(s.c3, s.c4, s.omega), q, ok.lambda_dot);
    CHECK(res.max > 1e-8 * bad.scale);
  }
}

TEST_CASE("violated case-3 equation shows up at 2w") {
  auto s = testing::make_admissible(1, 2, 1.4);
  s.p.b5 += 0.05;
  const auto rep = check_conditions(s.p, s.c3, s.c4, s.omega);
  CHECK_FALSE(rep.satisfied);
  const auto& e = rep.equations[2];
  CHECK_FALSE(e.satisfied);
  const auto res = nonlinear_residual(single_frequency_profile(s.c3, s.c4, s.omega), s.p, rep.lambda_dot);
  // sin(2wy) coefficient is (w/2) times the equation's left side
  CHECK(std::abs(res.per_frequency.at(2).first - 0.5 * s.omega * (e.lhs - e.rhs)) < 1e-8);
}

TEST_CASE("wave speed") {
  PerturbedParams p;
  p.a1 = 0.9; p.a2 = 0.3;
  CHECK(wave_speed(p, 0.5, 0.2, 1.5) == doctest::Approx(0.9 - 0.3 * 2.25).epsilon(1e-15));
  p.a2 = 0.0;
  CHECK(wave_speed(p, 0.5, 0.2, 1.5) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK_THROWS_AS(wave_speed(p, 0.0, 0.0, 1.0), IndeterminateSpeed);
  p.a3 = 2.0; p.a4 = 1.0;  // a4 w^4 - a3 w^2 + 1 = 0 at w = 1
  CHECK_THROWS_AS(wave_speed(p, 0.5, 0.2, 1.0), IndeterminateSpeed);
  CHECK_THROWS_AS(solve_lambda_dot(p, 0.5, 0.2, 1.0), IndeterminateSpeed);

  // cases where A1 = A2 = 0 is imposed directly
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {3, 5}, {3, 4}, {4, 5}}) {
    const auto s = testing::make_admissible(m, n, 1.2, 0.4, -0.3);
    const auto rep = check_conditions(s.p, s.c3, s.c4, s.omega);
    REQUIRE(rep.wave_speed);
    CHECK(std::abs(rep.lambda_dot - *rep.wave_speed) < 1e-12);
  }
}

TEST_CASE("trivial profile and report layout") {
  const auto s = testing::make_admissible(2, 2);
  const auto res = nonlinear_residual(TrigProfile{}, s.p, 0.3);
  CHECK(res.max == 0.0);
  const auto rep = check_conditions(s.p, 0.0, 0.0, 1.0);
  CHECK(rep.satisfied);
  CHECK_FALSE(rep.warnings.empty());

  const auto j = to_json(check_conditions(s.p, s.c3, s.c4, s.omega));
  for (const char* k : {"case", "equations", "lambda_dot", "wave_speed", "residual"}) CHECK(j.contains(k));
  CHECK(j["residual"].contains("per_frequency"));
  CHECK(j["satisfied"].get<bool>());
}
