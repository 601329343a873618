#include "fwlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fwlab/errors.hpp"

namespace fwlab {

namespace {
void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (a != b) throw ConfigError("fields live on different grids");
}
}  // namespace

Field::Field(PeriodicGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (static_cast<int>(samples_.size()) != grid_.size())
    throw ConfigError("sample count does not match grid size");
}

Field Field::zero(const PeriodicGrid& grid) {
  return Field(grid, std::vector<double>(grid.size(), 0.0));
}

Field Field::sampled(const PeriodicGrid& grid,
                     const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.point(i));
  return Field(grid, std::move(v));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : samples_) m = std::max(m, std::abs(x));
  return m;
}

bool Field::finite() const {
  for (double x : samples_)
    if (!std::isfinite(x)) return false;
  return true;
}

Field Field::operator+(const Field& o) const {
  require_same_grid(grid_, o.grid_);
  std::vector<double> v(samples_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = samples_[i] + o.samples_[i];
  return Field(grid_, std::move(v));
}

Field Field::operator-(const Field& o) const {
  require_same_grid(grid_, o.grid_);
  std::vector<double> v(samples_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = samples_[i] - o.samples_[i];
  return Field(grid_, std::move(v));
}

Field Field::operator*(double c) const {
  std::vector<double> v(samples_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = c * samples_[i];
  return Field(grid_, std::move(v));
}

Field multiply(const Field& a, const Field& b) {
  require_same_grid(a.grid_, b.grid_);
  std::vector<double> v(a.samples_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = a.samples_[i] * b.samples_[i];
  return Field(a.grid_, std::move(v));
}

Spectrum::Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != grid_.size())
    throw ConfigError("coefficient count does not match grid size");
}

double Spectrum::energy() const {
  double e = 0.0;
  for (const Complex& c : coeffs_) e += std::norm(c);
  return e / grid_.length();
}

}  // namespace fwlab
