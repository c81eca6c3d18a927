#include "steadylab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "steadylab/errors.hpp"

namespace steadylab {
namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW's planner is not thread-safe; execution with new-array calls is.
std::mutex g_plan_mutex;

const Plans& plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  auto* cptr = reinterpret_cast<fftw_complex*>(cplx.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), cptr, flags);
  p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cptr, real.data(), flags);
  if (!p.r2c || !p.c2r) throw InternalError("FFTW planning failed");
  return cache.emplace(n, p).first->second;
}

std::complex<double> i_pow(int order) {
  switch (((order % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

void SymbolParams::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("alpha and beta must be finite and nonnegative");
  }
}

Spectrum forward(const Grid& grid, const std::vector<double>& values) {
  const std::size_t n = grid.size();
  if (values.size() != n) throw InvalidArgument("value count does not match grid");
  const Plans& p = plans_for(n);
  std::vector<double> in(values);
  Spectrum out(n / 2 + 1);
  fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Spectrum forward(const Field& f) { return forward(f.grid(), f.values()); }

std::vector<double> inverse_values(const Grid& grid, const Spectrum& spec) {
  const std::size_t n = grid.size();
  if (spec.size() != n / 2 + 1) throw InvalidArgument("spectrum size does not match grid");
  double scale = 0.0;
  for (const auto& c : spec) scale = std::max(scale, std::abs(c));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  if (std::abs(spec.front().imag()) > tol || std::abs(spec.back().imag()) > tol) {
    throw InternalError("imaginary residue in self-conjugate bins exceeds 1e-12");
  }
  const Plans& p = plans_for(n);
  Spectrum in(spec);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& x : out) x *= inv_n;
  return out;
}

Field inverse(const Grid& grid, const Spectrum& spec, double time) {
  return Field(grid, inverse_values(grid, spec), time);
}

void differentiate_spectrum(const Grid& grid, Spectrum& spec, int order) {
  const std::size_t nyq = grid.size() / 2;
  const std::complex<double> ip = i_pow(order);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    spec[k] *= ip * std::pow(grid.wavenumber(k), order);
  }
  // Odd derivatives of the Nyquist cosine vanish on the grid.
  if (order % 2 != 0) spec[nyq] = 0.0;
}

Field differentiate(const Field& f, int order) {
  if (order < 1 || order > 5) {
    throw InvalidArgument("derivative order must be in [1,5], got " + std::to_string(order));
  }
  Spectrum s = forward(f);
  differentiate_spectrum(f.grid(), s, order);
  return inverse(f.grid(), s, f.time());
}

Field apply_k(const Field& f, const SymbolParams& sp) {
  sp.validate();
  Spectrum s = forward(f);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] /= sp.symbol(f.grid().wavenumber(k));
  return inverse(f.grid(), s, f.time());
}

Field apply_L(const Field& f, const SymbolParams& sp) {
  sp.validate();
  Spectrum s = forward(f);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= sp.symbol(f.grid().wavenumber(k));
  return inverse(f.grid(), s, f.time());
}

Field reflect(const Field& f, double axis) {
  const Grid& g = f.grid();
  Spectrum s = forward(f);
  const std::size_t nyq = g.size() / 2;
  for (std::size_t k = 0; k < nyq; ++k) {
    const double ph = 2.0 * g.wavenumber(k) * axis;
    s[k] = std::conj(s[k]) * std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  s[nyq] = s[nyq].real() * std::cos(2.0 * g.wavenumber(nyq) * axis);
  return inverse(g, s, f.time());
}

Field shift(const Field& f, double distance) {
  const Grid& g = f.grid();
  Spectrum s = forward(f);
  const std::size_t nyq = g.size() / 2;
  for (std::size_t k = 0; k < nyq; ++k) {
    const double ph = g.wavenumber(k) * distance;
    s[k] *= std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  s[nyq] = s[nyq].real() * std::cos(g.wavenumber(nyq) * distance);
  return inverse(g, s, f.time());
}

Field upsample(const Field& f, std::size_t factor) {
  if (factor == 0) throw InvalidArgument("upsample factor must be positive");
  if (factor == 1) return f;
  const Grid& g = f.grid();
  const Grid fine(g.length(), g.size() * factor);
  const Spectrum s = forward(f);
  Spectrum out(fine.num_modes(), 0.0);
  const double scale = static_cast<double>(factor);
  const std::size_t nyq = g.size() / 2;
  for (std::size_t k = 0; k < nyq; ++k) out[k] = scale * s[k];
  // the coarse Nyquist cosine splits between +nyq and -nyq on the fine grid
  out[nyq] = 0.5 * scale * s[nyq].real();
  return inverse(fine, out, f.time());
}

void dealias_spectrum(Spectrum& spec, std::size_t num_points, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InvalidArgument("dealias fraction must lie in (0,1]");
  }
  const double cutoff = fraction * static_cast<double>(num_points / 2);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (static_cast<double>(k) > cutoff + 1e-9) spec[k] = 0.0;
  }
}

Field dealias(const Field& f, double fraction) {
  Spectrum s = forward(f);
  dealias_spectrum(s, f.size(), fraction);
  return inverse(f.grid(), s, f.time());
}

double evaluate(const Grid& grid, const Spectrum& spec, double x) {
  const std::size_t nyq = grid.size() / 2;
  double sum = spec[0].real();
  for (std::size_t k = 1; k < nyq; ++k) {
    const double ph = grid.wavenumber(k) * x;
    sum += 2.0 * (spec[k].real() * std::cos(ph) - spec[k].imag() * std::sin(ph));
  }
  sum += spec[nyq].real() * std::cos(grid.wavenumber(nyq) * x);
  return sum / static_cast<double>(grid.size());
}

Field apply_symbol(const Field& f, const std::function<std::complex<double>(double)>& symbol) {
  Spectrum s = forward(f);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= symbol(f.grid().wavenumber(k));
  s.back() = s.back().real();
  return inverse(f.grid(), s, f.time());
}

}  // namespace steadylab
