#pragma once

#include <stdexcept>
#include <string>

namespace fwlab {

// Invalid grid/parameter/config input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf or otherwise undefined numeric result.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Spectrum fails Hermitian symmetry beyond tolerance.
class SymmetryError : public std::runtime_error {
 public:
  explicit SymmetryError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fwlab
