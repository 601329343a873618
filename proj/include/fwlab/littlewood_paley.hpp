#pragma once

#include <utility>
#include <vector>

#include "fwlab/field.hpp"

namespace fwlab {

// C^inf transition g(x)/(g(x)+g(1-x)) with g(x) = exp(-1/x) for x > 0,
// rising from 0 at x <= 0 to 1 at x >= 1.
double smooth_transition(double x);

// Dyadic partition (chi, phi): chi = 1 on |xi| <= 1, 0 on |xi| >= 4/3,
// phi(xi) = chi(xi/2) - chi(xi) supported in 3/4 <= |xi| <= 8/3, and
// chi(xi) + sum_{j=0}^{j_max} phi(2^{-j} xi) = 1 on the grid band.
class LPPartition {
 public:
  // Requires retained band to reach |xi| = 8/3 (xi_max >= 4). j_max is the
  // largest j whose ring intersects the grid band, so the telescoping sum
  // closes at every grid frequency.
  static LPPartition build(const PeriodicGrid& grid);

  static double chi(double xi);
  static double phi(double xi);

  const PeriodicGrid& grid() const { return grid_; }
  int j_min() const { return -1; }
  int j_max() const { return j_max_; }

  // Tabulated symbol values per FFT slot; index j from -1.
  const std::vector<double>& symbol(int j) const;

 private:
  LPPartition(PeriodicGrid grid, int j_max,
              std::vector<std::vector<double>> symbols)
      : grid_(grid), j_max_(j_max), symbols_(std::move(symbols)) {}

  PeriodicGrid grid_;
  int j_max_;
  std::vector<std::vector<double>> symbols_;  // [j+1][slot]
};

// The blocks Delta_j f for j = -1 .. j_max.
struct LPDecomposition {
  int j_min = -1;
  std::vector<Field> blocks;  // index j+1

  const Field& block(int j) const { return blocks[j + 1]; }
  int j_max() const { return static_cast<int>(blocks.size()) - 2; }
  Field reconstruct() const;
};

LPDecomposition lp_blocks(const Field& f, const LPPartition& partition);

// Besov norm (sum_j (2^{js} ||Delta_j f||_{L^p})^r)^{1/r}, sup over j when
// r = infinity; the j = -1 block carries weight 2^{-s}.
double besov_norm(const Field& f, const LPPartition& partition, double s,
                  double p, double r);
double besov_norm(const Field& f, double s, double p, double r);

// Both sides of ||f||_{H^s} <= ||f||_{H^{s1}}^{(s2-s)/(s2-s1)} *
// ||f||_{H^{s2}}^{(s-s1)/(s2-s1)}. Requires s1 < s < s2.
std::pair<double, double> interpolation_check(const Field& f, double s1,
                                              double s, double s2);

}  // namespace fwlab
