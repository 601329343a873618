#include "fwlab/littlewood_paley.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "fwlab/errors.hpp"
#include "fwlab/norms.hpp"
#include "fwlab/spectral.hpp"

namespace fwlab {

double smooth_transition(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double g = std::exp(-1.0 / x);
  const double gc = std::exp(-1.0 / (1.0 - x));
  return g / (g + gc);
}

double LPPartition::chi(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 4.0 / 3.0) return 0.0;
  return smooth_transition((4.0 / 3.0 - a) * 3.0);
}

double LPPartition::phi(double xi) { return chi(0.5 * xi) - chi(xi); }

LPPartition LPPartition::build(const PeriodicGrid& grid) {
  if (grid.retained_max_freq() < 8.0 / 3.0)
    throw ConfigError("grid band too small for a dyadic partition");
  const double xi_max = grid.max_freq();
  int j_max = 0;
  while (0.75 * std::pow(2.0, j_max + 1) <= xi_max) ++j_max;

  std::vector<std::vector<double>> symbols;
  symbols.reserve(j_max + 2);
  std::vector<double> chi_vals(grid.size());
  for (int slot = 0; slot < grid.size(); ++slot)
    chi_vals[slot] = chi(grid.freq(slot));
  symbols.push_back(std::move(chi_vals));
  for (int j = 0; j <= j_max; ++j) {
    const double scale = std::pow(2.0, -j);
    std::vector<double> vals(grid.size());
    for (int slot = 0; slot < grid.size(); ++slot)
      vals[slot] = phi(scale * grid.freq(slot));
    symbols.push_back(std::move(vals));
  }
  return LPPartition(grid, j_max, std::move(symbols));
}

const std::vector<double>& LPPartition::symbol(int j) const {
  return symbols_.at(j + 1);
}

Field LPDecomposition::reconstruct() const {
  Field acc = blocks.front();
  for (size_t i = 1; i < blocks.size(); ++i) acc = acc + blocks[i];
  return acc;
}

LPDecomposition lp_blocks(const Field& f, const LPPartition& partition) {
  if (f.grid() != partition.grid())
    throw ConfigError("field and partition grids differ");
  const Spectrum s = to_spectrum(f);
  LPDecomposition dec;
  dec.blocks.reserve(partition.j_max() + 2);
  for (int j = -1; j <= partition.j_max(); ++j) {
    const std::vector<double>& sym = partition.symbol(j);
    std::vector<Complex> coeffs(s.size());
    for (int slot = 0; slot < s.size(); ++slot)
      coeffs[slot] = sym[slot] * s[slot];
    dec.blocks.push_back(from_spectrum(Spectrum(f.grid(), std::move(coeffs))));
  }
  return dec;
}

double besov_norm(const Field& f, const LPPartition& partition, double s,
                  double p, double r) {
  const LPDecomposition dec = lp_blocks(f, partition);
  const bool sup_norm = std::isinf(r);
  double acc = 0.0;
  for (int j = -1; j <= partition.j_max(); ++j) {
    const double term =
        std::pow(2.0, j * s) * lebesgue_norm(dec.block(j), p);
    if (sup_norm) {
      acc = std::max(acc, term);
    } else {
      acc += std::pow(term, r);
    }
  }
  return sup_norm ? acc : std::pow(acc, 1.0 / r);
}

namespace {
const LPPartition& partition_for(const PeriodicGrid& grid) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, LPPartition> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(grid.length(), grid.size());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, LPPartition::build(grid)).first;
  return it->second;
}
}  // namespace

double besov_norm(const Field& f, double s, double p, double r) {
  return besov_norm(f, partition_for(f.grid()), s, p, r);
}

std::pair<double, double> interpolation_check(const Field& f, double s1,
                                              double s, double s2) {
  if (!(s1 < s && s < s2))
    throw ConfigError("interpolation check needs s1 < s < s2");
  const double lhs = sobolev_norm(f, s);
  const double t = (s - s1) / (s2 - s1);
  const double rhs =
      std::pow(sobolev_norm(f, s1), 1.0 - t) * std::pow(sobolev_norm(f, s2), t);
  return {lhs, rhs};
}

}  // namespace fwlab
