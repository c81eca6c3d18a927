#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "steadylab/grid.hpp"

namespace steadylab {

using Spectrum = std::vector<std::complex<double>>;

struct SymbolParams {
  double alpha = 0.0;
  double beta = 0.0;
  void validate() const;
  double symbol(double xi) const { return 1.0 + alpha * xi * xi + beta * xi * xi * xi * xi; }
};

// Unnormalized r2c transform (N/2+1 bins).
Spectrum forward(const Field& f);
Spectrum forward(const Grid& grid, const std::vector<double>& values);
// Inverse of forward, including the 1/N factor. DC and Nyquist bins must be
// real to 1e-12 relative, otherwise InternalError.
Field inverse(const Grid& grid, const Spectrum& spec, double time = 0.0);
std::vector<double> inverse_values(const Grid& grid, const Spectrum& spec);

Field differentiate(const Field& f, int order);
// Multiply each bin by (i xi)^order in place.
void differentiate_spectrum(const Grid& grid, Spectrum& spec, int order);

Field apply_k(const Field& f, const SymbolParams& s);
// f - alpha f_xx + beta f_xxxx
Field apply_L(const Field& f, const SymbolParams& s);

Field reflect(const Field& f, double axis);
Field shift(const Field& f, double distance);  // f(x - distance)
// Trigonometric interpolant sampled on a grid `factor` times finer.
Field upsample(const Field& f, std::size_t factor);
Field dealias(const Field& f, double fraction);
void dealias_spectrum(Spectrum& spec, std::size_t num_points, double fraction);

// Trigonometric interpolant at an arbitrary point.
double evaluate(const Grid& grid, const Spectrum& spec, double x);

// Multiply each bin by a complex symbol of the angular wavenumber.
Field apply_symbol(const Field& f, const std::function<std::complex<double>(double)>& symbol);

}  // namespace steadylab
