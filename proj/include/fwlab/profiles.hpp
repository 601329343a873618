#pragma once

#include "fwlab/field.hpp"

namespace fwlab {

// C^inf cutoff: 1 on |x| < plateau, 0 on |x| >= support, monotone smooth
// transition in between.
struct BumpProfile {
  double plateau;
  double support;

  double operator()(double x) const;
  Field sample(const PeriodicGrid& grid, double scale = 1.0) const;
};

// Throws ConfigError unless 0 < a < b.
BumpProfile bump(double a, double b);

}  // namespace fwlab
