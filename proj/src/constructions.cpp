#include "fwlab/constructions.hpp"

#include <cmath>
#include <string>

#include "fwlab/errors.hpp"
#include "fwlab/norms.hpp"
#include "fwlab/spectral.hpp"

namespace fwlab {

void ApproxSolutionParams::validate() const {
  if (alpha != 0 && alpha != 1)
    throw ConfigError("packet family parameter alpha must be 0 or 1");
  if (n < 1) throw ConfigError("packet frequency n must be >= 1");
  if (!(delta > 0.5 && delta < 1.0))
    throw ConfigError("packet width exponent delta must lie in (1/2, 1)");
  if (!(s > 1.5)) throw ConfigError("regularity s must exceed 3/2");
}

const BumpProfile& packet_envelope() {
  static const BumpProfile b = bump(1.0, 2.0);
  return b;
}

const BumpProfile& packet_carrier() {
  static const BumpProfile b = bump(2.0, 3.0);
  return b;
}

PeriodicGrid packet_grid(const ApproxSolutionParams& p, int oversample) {
  p.validate();
  const double min_box = 8.0 * std::pow(p.n, p.delta);
  int m = 0;
  while (2.0 * M_PI * std::pow(2.0, m) < min_box) ++m;
  const double box = 2.0 * M_PI * std::pow(2.0, m);
  // oversample points per carrier wavelength, rounded up to a power of two
  int size = 8;
  while (size < oversample * p.n * (1 << m)) size *= 2;
  return PeriodicGrid::make(box, size);
}

namespace {

void check_resolution(const ApproxSolutionParams& p, const PeriodicGrid& g) {
  const double min_box = 8.0 * std::pow(p.n, p.delta);
  if (g.length() < min_box * (1.0 - 1e-12))
    throw ConfigError("box too small for packet width: need L >= " +
                      std::to_string(min_box));
  const double ppw = 2.0 * M_PI / (p.n * g.spacing());
  if (ppw < 4.0 * (1.0 - 1e-12))
    throw ConfigError("grid does not resolve the carrier: " +
                      std::to_string(ppw) + " points per wavelength");
}

}  // namespace

std::pair<Field, Field> approx_solution(const ApproxSolutionParams& p,
                                        double t, const PeriodicGrid& grid) {
  p.validate();
  check_resolution(p, grid);
  const double width = std::pow(p.n, p.delta);
  const double packet_amp = std::pow(p.n, -p.s - 0.5 * p.delta);
  const double low_amp = p.alpha == 0 ? 0.0 : 1.0 / p.n;
  const BumpProfile& phi = packet_envelope();
  const BumpProfile& psi = packet_carrier();

  Field u = Field::sampled(grid, [&](double x) {
    return low_amp * psi(x / width) +
           packet_amp * phi(x / width) * std::cos(p.n * x - p.alpha * t);
  });
  Field eta =
      Field::sampled(grid, [&](double x) { return low_amp * psi(x / width); });
  return {std::move(u), std::move(eta)};
}

std::pair<Field, Field> approx_residuals(const ApproxSolutionParams& p,
                                         double t, const PeriodicGrid& grid) {
  auto [u, eta] = approx_solution(p, t, grid);

  const double width = std::pow(p.n, p.delta);
  const double packet_amp = std::pow(p.n, -p.s - 0.5 * p.delta);
  const BumpProfile& phi = packet_envelope();
  Field du_dt = Field::sampled(grid, [&](double x) {
    return p.alpha * packet_amp * phi(x / width) *
           std::sin(p.n * x - p.alpha * t);
  });

  Field u_defect = du_dt + multiply(u, derivative(u)) -
                   nonlocal_wave_operator(eta - u);
  // eta is time-independent, so its defect is just the flux divergence.
  Field eta_defect = derivative(multiply(eta, u));
  return {std::move(u_defect), std::move(eta_defect)};
}

std::pair<Field, Field> nonuniform_initial_data(const ApproxSolutionParams& p,
                                                const PeriodicGrid& grid) {
  return approx_solution(p, 0.0, grid);
}

void InflationDataParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (shells < 1) throw ConfigError("shell count must be >= 1");
  if (!(0.5 < band_lo && band_lo < band_hi && band_hi < 1.0))
    throw ConfigError("band must satisfy 1/2 < lo < hi < 1");
  if (!(2.0 * band_lo > band_hi))
    throw ConfigError("band overlaps its double: need 2*lo > hi");
  if (!(eta_amplitude >= 0.0) || !(eta_width > 0.0))
    throw ConfigError("eta profile needs amplitude >= 0 and width > 0");
}

InflationData inflation_data(const InflationDataParams& p,
                             const PeriodicGrid& grid) {
  p.validate();
  const double top = std::pow(2.0, p.shells) * p.band_hi;
  if (grid.retained_max_freq() < top)
    throw ConfigError("retained band too small: need xi >= " +
                      std::to_string(top));

  std::vector<Complex> coeffs(grid.size(), 0.0);
  std::vector<int> shell_count(p.shells + 1, 0);
  for (int slot = 0; slot < grid.size(); ++slot) {
    const double xi = grid.freq(slot);
    const double axi = std::abs(xi);
    for (int j = 1; j <= p.shells; ++j) {
      const double lo = std::pow(2.0, j) * p.band_lo;
      const double hi = std::pow(2.0, j) * p.band_hi;
      if (axi >= lo && axi <= hi) {
        coeffs[slot] = Complex(0.0, xi / (j * std::pow(8.0, j)));
        if (xi > 0) ++shell_count[j];
        break;
      }
    }
  }
  for (int j = 1; j <= p.shells; ++j) {
    if (shell_count[j] < 4)
      throw ConfigError("dyadic shell " + std::to_string(j) +
                        " holds only " + std::to_string(shell_count[j]) +
                        " grid frequencies; enlarge the box");
  }

  const Spectrum raw(grid, std::move(coeffs));
  const double raw_h32 = sobolev_norm(raw, 1.5);
  const double scale = p.epsilon / raw_h32;
  Field u0 = from_spectrum(raw) * scale;

  const double w = p.eta_width;
  Field eta_profile = Field::sampled(grid, [&](double x) {
    return p.eta_amplitude * std::exp(-x * x / (2.0 * w * w));
  });
  Field eta0 = eta_profile * (p.epsilon / sobolev_norm(eta_profile, 0.5));

  double harmonic = 0.0, harmonic_sq = 0.0;
  for (int j = 1; j <= p.shells; ++j) {
    harmonic += 1.0 / j;
    harmonic_sq += 1.0 / (double(j) * j);
  }
  const double band_cubes =
      std::pow(p.band_hi, 3) - std::pow(p.band_lo, 3);

  InflationReport rep;
  rep.u0_h32 = sobolev_norm(u0, 1.5);
  rep.eta0_h12 = sobolev_norm(eta0, 0.5);
  rep.unnormalized_slope = -band_cubes * harmonic / (3.0 * M_PI);
  rep.slope_predicted = rep.unnormalized_slope * scale;
  rep.slope_measured = fourier_interpolate(derivative(u0), 0.0);
  rep.harmonic_sum = harmonic;
  rep.neglected_tail = M_PI * M_PI / 6.0 - harmonic_sq;
  return {std::move(u0), std::move(eta0), rep};
}

BreakingData breaking_data(double a_slope, double eta_amp, double eta_width,
                           const PeriodicGrid& grid) {
  if (!(a_slope > 0.0))
    throw ConfigError("breaking data needs a positive slope parameter");
  if (!(eta_amp >= 0.0) || !(eta_width > 0.0))
    throw ConfigError("eta profile needs amplitude >= 0 and width > 0");

  Field u0 = Field::sampled(
      grid, [&](double x) { return -a_slope * x * std::exp(-0.5 * x * x); });
  Field eta0 = Field::sampled(grid, [&](double x) {
    return eta_amp * std::exp(-x * x / (2.0 * eta_width * eta_width));
  });

  BreakingCertificate cert;
  cert.x0 = 0.0;
  cert.slope_at_x0 = fourier_interpolate(derivative(u0), 0.0);
  cert.l2_u0 = lebesgue_norm(u0, 2.0);
  cert.linf_u0 = lebesgue_norm(u0, std::numeric_limits<double>::infinity());
  cert.l1_eta0 = lebesgue_norm(eta0, 1.0);
  double eta_min = 0.0;
  for (double v : eta0.samples()) eta_min = std::min(eta_min, v);
  cert.eta_nonnegative = eta_min >= -1e-12 * std::max(1.0, eta0.max_abs());
  const double sq = cert.slope_at_x0 * cert.slope_at_x0;
  cert.admissible =
      cert.slope_at_x0 < -2.0 &&
      sq > 4.0 * (cert.l2_u0 + cert.linf_u0 + cert.l1_eta0) &&
      cert.eta_nonnegative;
  cert.lifespan_bound = -2.0 / cert.slope_at_x0;
  return {std::move(u0), std::move(eta0), cert};
}

}  // namespace fwlab
