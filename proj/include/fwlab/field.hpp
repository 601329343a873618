#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "fwlab/grid.hpp"

namespace fwlab {

using Complex = std::complex<double>;

class Spectrum;

// A real-valued function sampled on a PeriodicGrid. Immutable after
// construction; all operations produce new Fields. The forward transform is
// cached lazily (shared across copies), so repeated spectral operations on
// the same field pay for one FFT.
class Field {
 public:
  Field(PeriodicGrid grid, std::vector<double> samples);

  static Field zero(const PeriodicGrid& grid);
  static Field sampled(const PeriodicGrid& grid,
                       const std::function<double(double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  double operator[](int i) const { return samples_[i]; }
  int size() const { return static_cast<int>(samples_.size()); }

  double max_abs() const;
  bool finite() const;

  Field operator+(const Field& o) const;
  Field operator-(const Field& o) const;
  Field operator*(double c) const;

  friend Field multiply(const Field& a, const Field& b);  // pointwise

 private:
  friend class SpectrumCacheAccess;
  PeriodicGrid grid_;
  std::vector<double> samples_;
  // Lazily filled by to_spectrum; coefficients in FFT slot order under the
  // convention F_k = h * sum_i f(x_i) exp(-i xi_k x_i).
  mutable std::shared_ptr<const std::vector<Complex>> spectrum_cache_;
};

// Fourier coefficients of a real field in FFT slot order, under the
// convention F_k = h * sum_i f(x_i) exp(-i xi_k x_i), inverse
// f(x_i) = (1/L) * sum_k F_k exp(i xi_k x_i). Under this normalization F_k
// approximates the continuum Fourier transform and Parseval reads
// h * sum_i f_i^2 = (1/L) * sum_k |F_k|^2.
class Spectrum {
 public:
  Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex operator[](int slot) const { return coeffs_[slot]; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double freq(int slot) const { return grid_.freq(slot); }

  // h * sum f = F_0; exact for the rectangle rule.
  double mass() const { return coeffs_[0].real(); }

  // (1/L) * sum_k |F_k|^2, the Parseval energy.
  double energy() const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

}  // namespace fwlab
