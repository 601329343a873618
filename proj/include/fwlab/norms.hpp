#pragma once

#include <utility>
#include <vector>

#include "fwlab/field.hpp"

namespace fwlab {

// L^p norm by the rectangle rule, (h * sum |f_i|^p)^{1/p}; p = infinity gives
// the max over collocation samples.
double lebesgue_norm(const Field& f, double p);

// Discrete H^s norm ((1/L) sum_k (1+xi_k^2)^s |F_k|^2)^{1/2}; s may be
// negative. Coincides with the L^2 norm at s = 0.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const Spectrum& s, double order);

// h * sum f, the conserved integral.
double mass(const Field& f);

struct PowerLawFit {
  double slope;
  double intercept;      // log of the prefactor
  double rms_residual;   // RMS of log-residuals
};

// Least-squares line through (log x, log y). Requires >= 3 positive pairs.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pairs);

}  // namespace fwlab
