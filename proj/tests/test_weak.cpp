#include <doctest.h>

#include <cmath>
#include <functional>

#include "helpers.hpp"
#include "steadylab/errors.hpp"
#include "steadylab/rkrlw.hpp"
#include "steadylab/spectral.hpp"
#include "steadylab/weak.hpp"

using namespace steadylab;
using testing::kPi;

namespace {

Trajectory sampled(const Grid& g, double t_end, std::size_t steps,
                   const std::function<double(double, double)>& v) {
  std::vector<Field> snaps;
  const double dt = t_end / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = dt * static_cast<double>(i);
    snaps.push_back(Field::sample(g, [&](double x) { return v(t, x); }, t));
  }
  return Trajectory(snaps, {}, dt);
}

GRKRLWParams linear_params() {
  GRKRLWParams p;
  p.a = 0.8; p.b = 0.0; p.kappa = 0.3; p.mu = 0.01; p.alpha = 0.5; p.beta = 0.05; p.m = 1;
  return p;
}

// cos(kx - w t) solves the linear equation for this w
double plane_omega(const GRKRLWParams& p, double k) {
  const double k2 = k * k;
  return (p.a * k - p.kappa * k * k2 - p.mu * k * k2 * k2) /
         (1.0 + p.alpha * k2 + p.beta * k2 * k2);
}

GRKRLWParams kdv() {
  GRKRLWParams p;
  p.a = 0.0; p.b = 6.0; p.kappa = 1.0; p.m = 1;
  return p;
}

double soliton(double c, double y) { return 0.5 * c * testing::sech2(0.5 * std::sqrt(c) * y); }

}  // namespace

TEST_CASE("bump derivatives match finite differences") {
  for (double s : {-0.7, -0.2, 0.0, 0.35, 0.8}) {
    const auto d = bump_derivatives(s, 5);
    const double h = 1e-4;
    const auto dp = bump_derivatives(s + h, 5), dm = bump_derivatives(s - h, 5);
    for (int k = 0; k < 5; ++k) {
      const double fd = (dp[k] - dm[k]) / (2 * h);
      CHECK(fd == doctest::Approx(d[k + 1]).epsilon(1e-4));
    }
  }
  CHECK(bump_derivatives(1.0, 3)[0] == 0.0);
  CHECK(bump_derivatives(-1.5, 3)[2] == 0.0);
}

TEST_CASE("weak residual of trivial fields") {
  const Grid g(10.0, 128);
  const GRKRLWParams p = kdv();
  const Trajectory zero = sampled(g, 1.0, 800, [](double, double) { return 0.0; });
  const auto bumps = random_bumps(zero, 20, 7);
  CHECK(weak_residual(zero, p, bumps) == 0.0);

  GRKRLWParams full = p;
  full.alpha = 0.4; full.beta = 0.1; full.mu = 0.02; full.a = 1.0; full.m = 3;
  const Trajectory c = sampled(g, 1.0, 1600, [](double, double) { return 1.7; });
  CHECK(weak_residual(c, full, random_bumps(c, 20, 7)) < 1e-10);

  TestBump outside;
  outside.center_t = 0.5; outside.radius_t = 0.2; outside.center_x = 0.5; outside.radius_x = 1.0;
  CHECK_THROWS_AS(weak_residual(zero, p, {outside}), InvalidArgument);
  outside.center_x = 5.0; outside.radius_t = 0.6;
  CHECK_THROWS_AS(weak_residual(zero, p, {outside}), InvalidArgument);
}

TEST_CASE("weak residual is linear for the linear equation") {
  const Grid g(10.0, 128);
  const GRKRLWParams p = linear_params();
  const auto f1 = [](double t, double x) { return std::sin(2 * kPi * x / 10.0 + t); };
  const auto f2 = [](double t, double x) { return t * t * std::cos(6 * kPi * x / 10.0); };
  const Trajectory a = sampled(g, 1.0, 40, f1), b = sampled(g, 1.0, 40, f2);
  const Trajectory ab = sampled(g, 1.0, 40, [&](double t, double x) { return f1(t, x) + 2 * f2(t, x); });
  const auto bumps = random_bumps(a, 10, 3);
  const auto ra = weak_residual_report(a, p, bumps), rb = weak_residual_report(b, p, bumps),
             rab = weak_residual_report(ab, p, bumps);
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    CHECK(std::abs(rab.per_bump[i] - ra.per_bump[i] - 2 * rb.per_bump[i]) < 1e-12);
  }
}

TEST_CASE("quadrature convergence on an exact plane wave") {
  const Grid g(2 * kPi, 256);
  const GRKRLWParams p = linear_params();
  const double w = plane_omega(p, 2.0);
  const auto v = [&](double t, double x) { return std::cos(2.0 * x - w * t); };
  TestBump b;
  b.center_t = 1.0; b.radius_t = 0.9; b.center_x = 3.0; b.radius_x = 2.0;
  const double coarse = weak_residual(sampled(g, 2.0, 40, v), p, {b});
  const double fine = weak_residual(sampled(g, 2.0, 80, v), p, {b});
  CHECK(fine < 1e-6);
  CHECK(coarse / fine >= 16.0);
}

TEST_CASE("simulated classical solutions are weak solutions") {
  const Grid g(20.0, 128);
  GRKRLWParams p;
  p.a = 0.5; p.b = 1.0; p.kappa = 0.2; p.mu = 0.01; p.alpha = 1.0; p.beta = 0.2; p.m = 2;
  const Field v0 = Field::sample(g, [](double x) { return 0.8 * testing::sech2(x - 10.0); });
  const Trajectory tr = simulate(v0, p, 2.0, 2e-3, 5);
  const auto bumps = random_bumps(tr, 20, 11);
  CHECK(bumps.size() == 20);
  CHECK(weak_residual(tr, p, bumps) < 1e-6);
}

TEST_CASE("steady certificate") {
  const Grid g(40.0, 512);
  const GRKRLWParams p = kdv();
  const auto bumps = random_bumps_1d(g, 20, 5);
  const Field zero = Field::sample(g, [](double) { return 0.0; });
  // only the literal +1 term survives, at round-off
  CHECK(steady_certificate(zero, 3.0, p, bumps).max_residual < 1e-14);
  const Field c = Field::sample(g, [](double) { return 0.4; });
  const auto rc = steady_certificate(c, -1.2, p, bumps);
  CHECK(rc.max_residual < 1e-12);
  CHECK(rc.plus_one_contribution < 1e-12);
  CHECK(rc.per_bump.size() == 20);

  const double speed = 2.0;
  const Field V = Field::sample(g, [&](double x) { return soliton(speed, x - 20.0); });
  const auto cert = steady_certificate(V, speed, p, bumps);
  CHECK(cert.max_residual < 1e-6);
  CHECK(steady_certificate(V, 1.5 * speed, p, bumps).max_residual > 1e-3);

  // translated extension of the same profile
  const Trajectory ext = sampled(g, 1.0, 400, [&](double t, double x) {
    return soliton(speed, x - 20.0 - speed * t);
  });
  CHECK(weak_residual(ext, p, random_bumps(ext, 20, 9)) < 1e-6);

  const auto j = to_json(cert);
  CHECK(j.contains("max_residual"));
  CHECK(j.contains("per_bump"));
  CHECK(j.contains("plus_one_contribution"));
  CHECK_THROWS_AS(steady_certificate(V, speed, p, {Bump1D{1.0, 2.0}}), InvalidArgument);
}
