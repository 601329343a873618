#include "fwlab/norms.hpp"

#include <cmath>
#include <limits>

#include "fwlab/errors.hpp"
#include "fwlab/spectral.hpp"

namespace fwlab {

double lebesgue_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw ConfigError("Lebesgue exponent must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  const double h = f.grid().spacing();
  double acc = 0.0;
  if (p == 1.0) {
    for (double x : f.samples()) acc += std::abs(x);
  } else if (p == 2.0) {
    for (double x : f.samples()) acc += x * x;
  } else {
    for (double x : f.samples()) acc += std::pow(std::abs(x), p);
  }
  return std::pow(h * acc, 1.0 / p);
}

double sobolev_norm(const Spectrum& s, double order) {
  double acc = 0.0;
  for (int slot = 0; slot < s.size(); ++slot) {
    const double xi = s.freq(slot);
    acc += std::pow(1.0 + xi * xi, order) * std::norm(s[slot]);
  }
  return std::sqrt(acc / s.grid().length());
}

double sobolev_norm(const Field& f, double s) {
  return sobolev_norm(to_spectrum(f), s);
}

double mass(const Field& f) {
  double acc = 0.0;
  for (double x : f.samples()) acc += x;
  return f.grid().spacing() * acc;
}

PowerLawFit fit_power_law(
    const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3)
    throw ConfigError("power-law fit needs at least 3 points");
  const int n = static_cast<int>(pairs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0))
      throw ConfigError("power-law fit needs strictly positive data");
    lx[i] = std::log(pairs[i].first);
    ly[i] = std::log(pairs[i].second);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw ConfigError("power-law fit is degenerate");
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace fwlab
