#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "helpers.hpp"
#include "steadylab/errors.hpp"
#include "steadylab/oracle.hpp"
#include "steadylab/rkrlw.hpp"
#include "steadylab/spectral.hpp"
#include "steadylab/trajectory.hpp"

using namespace steadylab;
using testing::kPi;

namespace {

GRKRLWParams generic() {
  GRKRLWParams p;
  p.a = 1.0;
  p.b = 0.8;
  p.kappa = 0.5;
  p.mu = 0.05;
  p.alpha = 1.0;
  p.beta = 0.5;
  p.m = 2;
  return p;
}

}  // namespace

TEST_CASE("flux examples") {
  const Grid g(2 * kPi, 64);
  const GRKRLWParams p = generic();
  const Field c = Field::sample(g, [](double) { return 0.7; });
  CHECK(max_abs(flux(c, p)) < 1e-13);

  GRKRLWParams adv;
  adv.a = 2.0;
  const Field s = Field::sample(g, [](double x) { return std::sin(x); });
  const Field expect = Field::sample(g, [](double x) { return 2.0 * std::cos(x); });
  CHECK(max_abs_diff(flux(s, adv), expect) < 1e-13);
}

TEST_CASE("flux equals the derivative of its potential") {
  const Grid g(2 * kPi, 128);
  const GRKRLWParams p = generic();
  const Field v = testing::random_band_limited(g, 21, 6);
  const Field vxx = differentiate(v, 2), vxxxx = differentiate(v, 4);
  std::vector<double> pot(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    pot[j] = p.a * v[j] + p.b * std::pow(v[j], p.m + 1) / (p.m + 1) + p.kappa * vxx[j] -
             p.mu * vxxxx[j];
  }
  CHECK(max_abs_diff(flux(v, p), differentiate(Field(g, pot), 1)) < 1e-10);
}

TEST_CASE("flux matches the finite-difference oracle") {
  const GRKRLWParams p = generic();
  double prev = 0.0;
  // Beyond N = 128 round-off in the fifth-derivative stencil takes over.
  for (std::size_t n : {64u, 128u}) {
    const Grid g(2 * kPi, n);
    const Field v = Field::sample(g, [](double x) { return 0.5 * std::exp(std::sin(x)); });
    const auto fd = oracle::fd_flux_divergence(v, p, 8);
    const Field sp = flux(v, p);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(fd[j] - sp[j]));
    CHECK(err < 1e-5);
    if (prev > 0.0) CHECK(prev / err > 64.0);
    prev = err;
  }
}

TEST_CASE("step consistency and trivial data") {
  const Grid g(2 * kPi, 64);
  const GRKRLWParams p = generic();
  const Field v = testing::random_band_limited(g, 1, 5);
  const Field rhs = rkrlw_rhs(v, p);
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3}) {
    const Field euler = v + dt * rhs;
    const double err = max_abs_diff(step(v, p, dt), euler);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
  CHECK(max_abs(step(Field::zeros(g), p, 1e-3)) == 0.0);
  CHECK_THROWS_AS(step(v, p, 0.0), InvalidArgument);
}

TEST_CASE("simulate to t_end = 0 keeps only v0") {
  const Grid g(2 * kPi, 32);
  const Field v = testing::random_band_limited(g, 2, 4);
  const Trajectory t = simulate(v, generic(), 0.0, 1e-3, 1);
  REQUIRE(t.size() == 1);
  CHECK(max_abs_diff(t.front(), v) == 0.0);
}

TEST_CASE("snapshots include first and last and land on t_end") {
  const Grid g(2 * kPi, 32);
  const Field v = testing::random_band_limited(g, 2, 4);
  const Trajectory t = simulate(v, generic(), 0.0105, 1e-3, 4);
  CHECK(t.front().time() == 0.0);
  CHECK(t.back().time() == doctest::Approx(0.0105).epsilon(1e-14));
}

TEST_CASE("linear modes follow the dispersion relation") {
  const Grid g(2 * kPi, 128);
  GRKRLWParams p = generic();
  p.b = 0.0;
  const Field v0 = testing::random_band_limited(g, 9, 40, 10.0);
  const Trajectory tr = simulate(v0, p, 1.0, 1e-3, 1000);
  const Spectrum s0 = forward(v0), s1 = forward(tr.back());
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < s0.size(); ++k) {
    const double w = dispersion(p, g.wavenumber(k));
    const auto expect = s0[k] * std::polar(1.0, -w * 1.0);
    err = std::max(err, std::abs(s1[k] - expect));
    scale = std::max(scale, std::abs(s0[k]));
  }
  CHECK(err / scale < 1e-8);
}

TEST_CASE("mass and energy examples") {
  const Grid g(3.0, 32);
  CHECK(mass(Field::sample(g, [](double) { return 1.0; })) == doctest::Approx(3.0));
  const Field c = Field::sample(g, [&](double x) { return std::cos(2 * kPi * x / 3.0); });
  CHECK(energy(c, GRKRLWParams{}) == doctest::Approx(1.5).epsilon(1e-14));
  const Grid gg(2 * kPi, 256);
  const Field v = Field::sample(gg, [](double x) { return std::exp(std::cos(x)) - 1.0; });
  const GRKRLWParams p = generic();
  CHECK(std::abs(energy(v, p) - oracle::fd_energy(v, p)) < 1e-8);
}

TEST_CASE("short run conserves mass and energy") {
  const Grid g(40.0, 256);
  const GRKRLWParams p = generic();
  const Field v0 = Field::sample(g, [](double x) { return testing::sech2(x - 20.0); });
  const Trajectory tr = simulate(v0, p, 1.0, 1e-3, 1000);
  const double m0 = mass(v0), e0 = energy(v0, p);
  CHECK(std::abs(mass(tr.back()) - m0) / std::max(1.0, std::abs(m0)) < 1e-12);
  CHECK(std::abs(energy(tr.back(), p) - e0) / e0 < 1e-9);
}

TEST_CASE("forward then backward step returns close to start") {
  const Grid g(2 * kPi, 64);
  const GRKRLWParams p = generic();
  const Field v = testing::random_band_limited(g, 7, 5);
  double prev = 0.0;
  for (double dt : {4e-2, 2e-2}) {
    const double err = max_abs_diff(step(step(v, p, dt), p, -dt), v);
    if (prev > 0.0) CHECK(prev / err > 16.0);
    prev = err;
  }
}

TEST_CASE("translation equivariance on grid shifts") {
  const Grid g(2 * kPi, 64);
  const GRKRLWParams p = generic();
  const Field v = testing::random_band_limited(g, 8, 5);
  const double s = 5 * g.spacing();
  const Trajectory a = simulate(shift(v, s), p, 0.05, 1e-3, 50);
  const Trajectory b = simulate(v, p, 0.05, 1e-3, 50);
  CHECK(max_abs_diff(a.back(), shift(b.back(), s)) < 1e-10);
}

TEST_CASE("presets") {
  const PresetMask kdv = preset("KdV");
  CHECK(kdv.fixed_m == 1);
  GRKRLWParams p = generic();
  CHECK_THROWS_AS(kdv.check(p), InvalidArgument);
  const GRKRLWParams q = kdv.apply(p);
  CHECK(q.alpha == 0.0);
  CHECK(q.beta == 0.0);
  CHECK(q.mu == 0.0);
  CHECK(q.m == 1);
  CHECK(q.kappa == p.kappa);
  const PresetMask rk = preset("Rosenau_KdV");
  CHECK(rk.apply(p).alpha == 0.0);
  CHECK(rk.apply(p).beta == p.beta);
  CHECK(preset("Rosenau_Kawahara").apply(p).mu == p.mu);
  CHECK_THROWS_AS(preset("Burgers"), InvalidArgument);
  CHECK(preset_names().size() == 7);
}

TEST_CASE("trajectory serialization") {
  const Grid g(2 * kPi, 16);
  const Field v = testing::random_band_limited(g, 4, 3);
  const Trajectory tr = simulate(v, generic(), 0.003, 1e-3, 1);
  const nlohmann::json j = to_json(tr);
  const Trajectory back = trajectory_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(back.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(back[i].time() == tr[i].time());
    CHECK(back[i].values() == tr[i].values());
  }
  std::ostringstream os;
  write_csv(tr, os);
  CHECK(os.str().rfind("t,x,v\n", 0) == 0);
  CHECK_THROWS_AS(Trajectory({v, v}), InvalidArgument);
}
