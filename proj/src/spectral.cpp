#include "fwlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "fwlab/errors.hpp"

namespace fwlab {

class SpectrumCacheAccess {
 public:
  static std::shared_ptr<const std::vector<Complex>>& cache(const Field& f) {
    return f.spectrum_cache_;
  }
};

namespace {

// Plan creation is not thread-safe in FFTW; execution on caller buffers is.
struct PlanCache {
  std::mutex mu;
  std::map<int, fftw_plan> forward, backward;

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto& table = sign == FFTW_FORWARD ? forward : backward;
    auto it = table.find(n);
    if (it != table.end()) return it->second;
    std::vector<Complex> dummy_in(n), dummy_out(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(dummy_in.data()),
        reinterpret_cast<fftw_complex*>(dummy_out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    table.emplace(n, p);
    return p;
  }
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void run_dft(std::vector<Complex>& in, std::vector<Complex>& out, int sign) {
  fftw_plan p = plans().get(static_cast<int>(in.size()), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Spectrum to_spectrum(const Field& f) {
  auto& cache = SpectrumCacheAccess::cache(f);
  if (cache) return Spectrum(f.grid(), *cache);

  const int n = f.size();
  std::vector<Complex> in(n), out(n);
  for (int i = 0; i < n; ++i) in[i] = f[i];
  run_dft(in, out, FFTW_FORWARD);
  // x_0 = -L/2 shifts each mode by exp(i pi k) = (-1)^k; N even makes the
  // slot parity equal the mode parity.
  const double h = f.grid().spacing();
  for (int slot = 0; slot < n; ++slot) {
    out[slot] *= (slot % 2 == 0) ? h : -h;
  }
  // Real input makes the transform Hermitian in exact arithmetic; enforce it
  // exactly so narrow-band projections of the result stay symmetric even
  // where the coefficients are pure rounding noise.
  out[0] = Complex(out[0].real(), 0.0);
  out[n / 2] = Complex(out[n / 2].real(), 0.0);
  for (int k = 1; k < n / 2; ++k) {
    const Complex c = 0.5 * (out[k] + std::conj(out[n - k]));
    out[k] = c;
    out[n - k] = std::conj(c);
  }
  cache = std::make_shared<const std::vector<Complex>>(out);
  return Spectrum(f.grid(), std::move(out));
}

Field from_spectrum(const Spectrum& s) {
  const int n = s.size();
  std::vector<Complex> in(n), out(n);
  double max_coeff = 0.0;
  for (int slot = 0; slot < n; ++slot) {
    in[slot] = (slot % 2 == 0) ? s[slot] : -s[slot];
    max_coeff = std::max(max_coeff, std::abs(s[slot]));
  }
  run_dft(in, out, FFTW_BACKWARD);

  const double inv_l = 1.0 / s.grid().length();
  double max_real = 0.0, max_imag = 0.0;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = out[i].real() * inv_l;
    max_real = std::max(max_real, std::abs(v[i]));
    max_imag = std::max(max_imag, std::abs(out[i].imag()) * inv_l);
  }
  const double scale = std::max(max_real, max_coeff * inv_l);
  if (scale > 0.0 && max_imag > 1e-8 * scale) {
    throw SymmetryError("spectrum is not Hermitian: imaginary residue " +
                        std::to_string(max_imag / scale));
  }
  Field result(s.grid(), std::move(v));
  if (scale == 0.0 || max_imag <= 1e-13 * scale) {
    SpectrumCacheAccess::cache(result) =
        std::make_shared<const std::vector<Complex>>(s.coeffs());
  }
  return result;
}

Spectrum apply_multiplier(const Spectrum& s,
                          const std::function<Complex(double)>& m) {
  const PeriodicGrid& g = s.grid();
  const int n = s.size();
  std::vector<Complex> out(n);
  for (int slot = 0; slot < n; ++slot) {
    const Complex mv = m(g.freq(slot));
    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
      throw NumericError("multiplier is not finite at xi = " +
                         std::to_string(g.freq(slot)));
    out[slot] = mv * s[slot];
  }
  // The k = -N/2 mode has no +N/2 partner; an odd multiplier must zero it to
  // keep the inverse transform real.
  const double xn = g.max_freq();
  const Complex mp = m(xn), mm = m(-xn);
  const double mag = std::max(std::abs(mp), std::abs(mm));
  if (mag == 0.0 || std::abs(mp + mm) <= 1e-12 * mag) {
    out[g.nyquist_slot()] = 0.0;
  }
  return Spectrum(g, std::move(out));
}

Field apply_multiplier(const Field& f,
                       const std::function<Complex(double)>& m) {
  return from_spectrum(apply_multiplier(to_spectrum(f), m));
}

Field derivative(const Field& f) {
  return apply_multiplier(f, [](double xi) { return Complex(0.0, xi); });
}

Field nonlocal_wave_operator(const Field& f) {
  return apply_multiplier(
      f, [](double xi) { return Complex(0.0, xi / (1.0 + xi * xi)); });
}

Spectrum dealias(const Spectrum& s) {
  const double cutoff = s.grid().retained_max_freq();
  std::vector<Complex> out(s.coeffs());
  for (int slot = 0; slot < s.size(); ++slot) {
    if (std::abs(s.freq(slot)) > cutoff) out[slot] = 0.0;
  }
  return Spectrum(s.grid(), std::move(out));
}

Field dealias(const Field& f) {
  return from_spectrum(dealias(to_spectrum(f)));
}

double fourier_interpolate(const Spectrum& s, double x) {
  const PeriodicGrid& g = s.grid();
  x = g.wrap(x);
  const int n = s.size();
  const double dxi = g.freq_spacing();
  // Hermitian pairing: sum over k >= 1 of 2 Re(F_k e^{i xi x}), plus k = 0
  // and the unpaired Nyquist mode. The phase recurrence is re-synced
  // periodically to keep roundoff at collocation-point exactness level.
  const Complex step = std::polar(1.0, dxi * x);
  Complex phase(1.0, 0.0);
  double acc = s[0].real();
  for (int k = 1; k < n / 2; ++k) {
    if (k % 256 == 0) phase = std::polar(1.0, k * dxi * x);
    else phase *= step;
    acc += 2.0 * (s[k] * phase).real();
  }
  const double xi_nyq = -g.max_freq();
  acc += (s[g.nyquist_slot()] * std::polar(1.0, xi_nyq * x)).real();
  return acc / g.length();
}

double fourier_interpolate(const Field& f, double x) {
  return fourier_interpolate(to_spectrum(f), x);
}

double spectral_tail_fraction(const Field& f) {
  const Spectrum s = to_spectrum(f);
  const double cutoff = f.grid().retained_max_freq();
  double total = 0.0, tail = 0.0;
  for (int slot = 0; slot < s.size(); ++slot) {
    const double axi = std::abs(s.freq(slot));
    if (axi > cutoff) continue;
    const double e = std::norm(s[slot]);
    total += e;
    if (axi > 0.5 * cutoff) tail += e;
  }
  if (total <= 0.0) throw NumericError("tail fraction of a zero field");
  return tail / total;
}

Field spectral_refine(const Field& f, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    throw ConfigError("refinement factor must be a power of two >= 1");
  if (factor == 1) return f;
  const Spectrum s = to_spectrum(f);
  const PeriodicGrid fine =
      PeriodicGrid::make(f.grid().length(), f.grid().size() * factor);
  std::vector<Complex> out(fine.size(), 0.0);
  const int n = f.grid().size();
  for (int slot = 0; slot < n; ++slot) {
    const int k = f.grid().mode(slot);
    if (k == -n / 2) {
      // Split the unpaired coarse Nyquist mode over +-N/2 on the fine grid.
      out[n / 2] = 0.5 * s[slot];
      out[fine.size() - n / 2] = 0.5 * std::conj(s[slot]);
    } else {
      out[k >= 0 ? k : fine.size() + k] = s[slot];
    }
  }
  return from_spectrum(Spectrum(fine, std::move(out)));
}

Field spectral_restrict(const Field& f, const PeriodicGrid& coarse) {
  if (coarse.length() != f.grid().length() ||
      f.grid().size() % coarse.size() != 0)
    throw ConfigError("restriction target is not a coarsening of the grid");
  if (coarse.size() == f.grid().size()) return f;
  const Spectrum s = to_spectrum(f);
  std::vector<Complex> out(coarse.size(), 0.0);
  const int nc = coarse.size(), nf = f.grid().size();
  for (int slot = 0; slot < nc; ++slot) {
    const int k = coarse.mode(slot);
    if (k == -nc / 2) continue;  // coarse Nyquist left empty
    out[slot] = s[k >= 0 ? k : nf + k];
  }
  return from_spectrum(Spectrum(coarse, std::move(out)));
}

}  // namespace fwlab
