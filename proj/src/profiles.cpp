#include "fwlab/profiles.hpp"

#include <cmath>

#include "fwlab/errors.hpp"
#include "fwlab/littlewood_paley.hpp"

namespace fwlab {

double BumpProfile::operator()(double x) const {
  const double a = std::abs(x);
  if (a < plateau) return 1.0;
  if (a >= support) return 0.0;
  return smooth_transition((support - a) / (support - plateau));
}

Field BumpProfile::sample(const PeriodicGrid& grid, double scale) const {
  return Field::sampled(grid,
                        [this, scale](double x) { return (*this)(x / scale); });
}

BumpProfile bump(double a, double b) {
  if (!(0.0 < a && a < b))
    throw ConfigError("bump radii must satisfy 0 < plateau < support");
  return BumpProfile{a, b};
}

}  // namespace fwlab
