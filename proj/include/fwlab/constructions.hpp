#pragma once

#include <utility>
#include <vector>

#include "fwlab/field.hpp"
#include "fwlab/profiles.hpp"

namespace fwlab {

// Two-parameter family of approximate solutions
//   u(x,t) = (alpha/n) psi(x/n^delta)
//            + n^{-s-delta/2} phi(x/n^delta) cos(n x - alpha t),
//   eta(x,t) = (alpha/n) psi(x/n^delta),
// with phi = bump(1,2), psi = bump(2,3).
struct ApproxSolutionParams {
  int alpha = 1;       // 0 or 1
  int n = 16;          // carrier frequency, >= 1
  double delta = 0.75; // in (1/2, 1)
  double s = 2.0;      // > 3/2

  void validate() const;
};

// Packet cutoffs shared by the whole family.
const BumpProfile& packet_envelope();  // bump(1,2)
const BumpProfile& packet_carrier();   // bump(2,3)

// Auto-sized box for the packet family: L = 2*pi*2^m with L >= 8*n^delta, and
// N giving oversample points per carrier wavelength (power of two).
PeriodicGrid packet_grid(const ApproxSolutionParams& p, int oversample = 4);

std::pair<Field, Field> approx_solution(const ApproxSolutionParams& p,
                                        double t, const PeriodicGrid& grid);

// Residuals of the approximate solution under the evolution system: first
// component is the u-equation defect, second the eta-equation defect. The
// time derivative is closed-form, spatial parts spectral.
std::pair<Field, Field> approx_residuals(const ApproxSolutionParams& p,
                                         double t, const PeriodicGrid& grid);

// The family at t = 0, used as initial data for actual solves.
std::pair<Field, Field> nonuniform_initial_data(const ApproxSolutionParams& p,
                                                const PeriodicGrid& grid);

// Critical-space data with spectrum on dyadic images of a band
// C = [band_lo, band_hi] in (1/2, 1), C disjoint from 2C: coefficient
// i*xi/(j*2^{3j}) on |xi| in 2^j C for j = 1..shells, normalized so the
// H^{3/2} norm equals epsilon. eta is a Gaussian normalized in H^{1/2}.
struct InflationDataParams {
  double epsilon = 0.01;
  int shells = 8;
  double band_lo = 0.55;
  double band_hi = 0.65;
  double eta_amplitude = 1.0;
  double eta_width = 1.0;

  void validate() const;
};

struct InflationReport {
  double u0_h32 = 0;            // == epsilon by normalization
  double eta0_h12 = 0;
  double slope_measured = 0;    // u0'(0) from the sampled field
  double slope_predicted = 0;   // closed-form band-integral prediction
  double unnormalized_slope = 0;
  double harmonic_sum = 0;      // H_N = sum_{j<=N} 1/j
  double neglected_tail = 0;    // sum_{j>N} 1/j^2, the dropped-shell weight
};

struct InflationData {
  Field u0;
  Field eta0;
  InflationReport report;
};

InflationData inflation_data(const InflationDataParams& p,
                             const PeriodicGrid& grid);

// Slope/size certificate for gradient blow-up at x0 = 0:
// admissible iff u0'(0) < -2, u0'(0)^2 > 4(||u0||_L2 + ||u0||_Linf +
// ||eta0||_L1) and eta0 >= 0; then the lifespan is at most -2/u0'(0) < 1.
struct BreakingCertificate {
  double x0 = 0.0;
  double slope_at_x0 = 0.0;
  double l2_u0 = 0.0;
  double linf_u0 = 0.0;
  double l1_eta0 = 0.0;
  bool eta_nonnegative = false;
  bool admissible = false;
  double lifespan_bound = 0.0;  // -2/u0'(x0), meaningful when admissible
};

struct BreakingData {
  Field u0;
  Field eta0;
  BreakingCertificate cert;
};

// u0(x) = -a_slope * x * exp(-x^2/2), eta0 = eta_amp * exp(-x^2/(2 w^2)).
// All certificate norms are quadrature values on the grid. Inadmissible
// parameters return admissible = false, not an error.
BreakingData breaking_data(double a_slope, double eta_amp, double eta_width,
                           const PeriodicGrid& grid);

}  // namespace fwlab
