#include "fwlab/grid.hpp"

#include <string>

#include "fwlab/errors.hpp"

namespace fwlab {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

PeriodicGrid PeriodicGrid::make(double length, int size) {
  if (!(length > 0.0)) {
    throw ConfigError("grid length must be positive, got " +
                      std::to_string(length));
  }
  if (!is_power_of_two(size) || size < 8) {
    throw ConfigError("grid size must be a power of two >= 8, got " +
                      std::to_string(size));
  }
  return PeriodicGrid(length, size);
}

}  // namespace fwlab
