#pragma once

#include <functional>

#include "fwlab/field.hpp"

namespace fwlab {

// Forward DFT under the grid convention; result is cached on the field.
Spectrum to_spectrum(const Field& f);

// Inverse DFT. The imaginary residue of the inverse transform must be below
// 1e-8 of the field magnitude (Hermitian symmetry), else SymmetryError.
Field from_spectrum(const Spectrum& s);

// Applies a Fourier multiplier m(xi). m must satisfy m(-xi) = conj(m(xi));
// odd multipliers (detected from m(+-xi_nyquist)) zero the unpaired Nyquist
// mode, even ones keep it. A NaN/Inf multiplier value raises NumericError.
Spectrum apply_multiplier(const Spectrum& s,
                          const std::function<Complex(double)>& m);
Field apply_multiplier(const Field& f,
                       const std::function<Complex(double)>& m);

// d/dx, multiplier i*xi.
Field derivative(const Field& f);

// The nonlocal operator d/dx (I - d2/dx2)^{-1}, multiplier i*xi/(1+xi^2).
Field nonlocal_wave_operator(const Field& f);

// Two-thirds rule: zeroes coefficients with |xi| > (2/3) * xi_max.
Field dealias(const Field& f);
Spectrum dealias(const Spectrum& s);

// Trigonometric interpolant (1/L) sum_k F_k exp(i xi_k x), real part.
// Exact at collocation points for band-limited data.
double fourier_interpolate(const Field& f, double x);
double fourier_interpolate(const Spectrum& s, double x);

// Fraction of the Parseval energy in the top octave of retained frequencies
// (retained = two-thirds band). Throws NumericError on a zero field.
double spectral_tail_fraction(const Field& f);

// Zero-padded spectral refinement onto a grid with factor*N points (same L),
// and its inverse truncation. Test oracles and resolution studies.
Field spectral_refine(const Field& f, int factor);
Field spectral_restrict(const Field& f, const PeriodicGrid& coarse);

}  // namespace fwlab
