#include "steadylab/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "steadylab/errors.hpp"

namespace steadylab {

void GRKRLWParams::validate() const {
  for (double x : {a, b, kappa, mu, alpha, beta}) {
    if (!std::isfinite(x)) throw InvalidArgument("GRKRLW coefficients must be finite");
  }
  if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");
  if (beta < 0.0) throw InvalidArgument("beta must be >= 0");
  if (m < 1) throw InvalidArgument("m must be >= 1");
}

void PerturbedParams::validate() const {
  for (double x : a_coeffs()) {
    if (!std::isfinite(x)) throw InvalidArgument("a coefficients must be finite");
  }
  for (double x : b_coeffs()) {
    if (!std::isfinite(x)) throw InvalidArgument("b coefficients must be finite");
  }
  if (m < 1 || m > 4) throw InvalidArgument("m must be in {1,2,3,4}");
  if (n < 2) throw InvalidArgument("n must be an integer >= 2");
}

void PerturbedParams::validate_on(const Grid& grid) const {
  validate();
  double scale = 1.0 + std::abs(a3) + std::abs(a4);
  for (std::size_t k = 0; k < grid.num_modes(); ++k) {
    const double xi = grid.wavenumber(k);
    const double s = mass_symbol(xi);
    const double ref = std::max(1.0, scale * std::pow(std::max(1.0, std::abs(xi)), 4));
    if (std::abs(s) <= 1e-12 * ref) {
      std::ostringstream os;
      os.precision(17);
      os << "symbol 1 - a3 xi^2 + a4 xi^4 vanishes at xi = " << xi << " (mode " << k << ")";
      throw ConfigurationError(os.str());
    }
  }
}

PerturbedParams PerturbedParams::from_rkrlw(const GRKRLWParams& p) {
  PerturbedParams q;
  q.a1 = p.a;
  q.a2 = p.kappa;
  q.a3 = -p.alpha;
  q.a4 = p.beta;
  q.a5 = p.b / static_cast<double>(p.m + 1);
  q.n = p.m + 1;
  q.m = std::clamp(p.m, 1, 4);
  q.b11 = p.mu;
  return q;
}

namespace {

const char* kAll[] = {"a", "b", "kappa", "mu", "alpha", "beta", "m"};

PresetMask make(Preset p, std::string name, std::vector<std::string> zero,
                std::optional<int> fixed_m, std::string note = {}) {
  PresetMask mk{p, std::move(name), std::move(zero), {}, fixed_m, std::move(note)};
  for (const char* c : kAll) {
    const std::string s = c;
    if (s == "m" && fixed_m) continue;
    if (std::find(mk.zero.begin(), mk.zero.end(), s) == mk.zero.end()) mk.free.push_back(s);
  }
  return mk;
}

double get(const GRKRLWParams& p, const std::string& name) {
  if (name == "a") return p.a;
  if (name == "b") return p.b;
  if (name == "kappa") return p.kappa;
  if (name == "mu") return p.mu;
  if (name == "alpha") return p.alpha;
  if (name == "beta") return p.beta;
  throw InvalidArgument("unknown coefficient " + name);
}

void set_zero(GRKRLWParams& p, const std::string& name) {
  if (name == "a") p.a = 0;
  else if (name == "b") p.b = 0;
  else if (name == "kappa") p.kappa = 0;
  else if (name == "mu") p.mu = 0;
  else if (name == "alpha") p.alpha = 0;
  else if (name == "beta") p.beta = 0;
}

}  // namespace

PresetMask preset(Preset which) {
  switch (which) {
    case Preset::kKdV:
      return make(which, "KdV", {"alpha", "beta", "mu"}, 1);
    case Preset::kRLW:
      return make(which, "RLW", {"kappa", "beta", "mu"}, 1);
    case Preset::kRosenauRLW:
      return make(which, "Rosenau_RLW", {"kappa", "mu"}, std::nullopt,
                  "b = m+1 recovers the (v^{m+1})_x normalization");
    case Preset::kRosenauKdV:
      return make(which, "Rosenau_KdV", {"alpha", "mu"}, std::nullopt);
    case Preset::kRosenauKdVRLW:
      return make(which, "Rosenau_KdV_RLW", {"mu"}, std::nullopt);
    case Preset::kRosenauKawahara:
      return make(which, "Rosenau_Kawahara", {"alpha"}, std::nullopt);
    case Preset::kRosenauKawaharaRLW:
      return make(which, "Rosenau_Kawahara_RLW", {}, std::nullopt);
  }
  throw InvalidArgument("unknown preset");
}

std::vector<std::string> preset_names() {
  return {"KdV", "RLW", "Rosenau_RLW", "Rosenau_KdV", "Rosenau_KdV_RLW",
          "Rosenau_Kawahara", "Rosenau_Kawahara_RLW"};
}

PresetMask preset(const std::string& name) {
  const Preset all[] = {Preset::kKdV, Preset::kRLW, Preset::kRosenauRLW, Preset::kRosenauKdV,
                        Preset::kRosenauKdVRLW, Preset::kRosenauKawahara,
                        Preset::kRosenauKawaharaRLW};
  for (Preset p : all) {
    PresetMask mk = preset(p);
    if (mk.name == name) return mk;
  }
  throw InvalidArgument("unknown preset '" + name + "'");
}

void PresetMask::check(const GRKRLWParams& p) const {
  for (const auto& z : zero) {
    if (get(p, z) != 0.0) {
      throw InvalidArgument("preset " + name + " requires " + z + " = 0");
    }
  }
  if (fixed_m && p.m != *fixed_m) {
    throw InvalidArgument("preset " + name + " requires m = " + std::to_string(*fixed_m));
  }
}

GRKRLWParams PresetMask::apply(GRKRLWParams p) const {
  for (const auto& z : zero) set_zero(p, z);
  if (fixed_m) p.m = *fixed_m;
  return p;
}

int nonlinear_degree(const GRKRLWParams& p) { return p.b != 0.0 ? p.m + 1 : 1; }

int nonlinear_degree(const PerturbedParams& p) {
  int d = 1;
  if (p.a5 != 0.0) d = std::max(d, p.n);
  if (p.b4 != 0.0) d = std::max(d, p.m + 1);
  if (p.b3 != 0.0 || p.b5 != 0.0 || p.b8 != 0.0 || p.b9 != 0.0 || p.b12 != 0.0) d = std::max(d, 2);
  if (p.b6 != 0.0 || p.b7 != 0.0) d = std::max(d, 3);
  return d;
}

double dealias_fraction_for_degree(int degree) { return degree <= 2 ? 2.0 / 3.0 : 0.5; }

}  // namespace steadylab
