#pragma once

// Comparing empirical counts with predictions: exponent fits, ratio tables
// and chi-square equidistribution tests over fixed cell partitions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flagcount/enumerate.hpp"
#include "flagcount/predictions.hpp"
#include "flagcount/shape.hpp"

namespace flagcount {

class VerifyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CountRecord {
  double X = 0;
  std::uint64_t count = 0;
  double predicted = 0;
  double ratio = 0;
};

struct ExponentFit {
  double slope = 0;
  double max_residual = 0;
};

// Least squares of log(count) against log(X).  Needs >= 3 records with
// distinct X and positive counts.
ExponentFit fit_exponent(std::span<CountRecord const> records);

// X exactly as a rational, so X^2 is exact.
Rational exact_rational(double value);

std::vector<CountRecord> ratio_table(Partition const& p, HeightKind height,
                                     std::span<double const> Xs,
                                     CountOptions const& options = {});

struct Cell {
  std::string description;
  double mass = 0;
};

struct CellPartition {
  std::vector<Cell> cells;
};

// Cells of the fundamental domain: y-bands at levels b/(b-j), the lowest
// k - b of them split at |x| = 1/4.  Masses are hyperbolic area fractions.
class ModularCells {
 public:
  explicit ModularCells(int k);
  CellPartition const& partition() const { return partition_; }
  // Exact on the rational coordinates of the point.
  std::size_t classify(ShapePoint2 const& p) const;
  // Hyperbolic area of the whole domain, computed by quadrature.
  double total_area() const { return total_area_; }

 private:
  CellPartition partition_;
  std::vector<Rational> levels_sq_;  // squared band edges above the arc
  int split_bands_ = 0;
  double total_area_ = 0;
};

ModularCells modular_cells(int k);

// Unit vectors modulo sign, banded by |last coordinate| (n = 3) or by
// |second coordinate| with equal-angle edges (n = 2).  All k cells have
// mass 1/k.
class SphereCapCells {
 public:
  SphereCapCells(int n, int k);
  CellPartition const& partition() const { return partition_; }
  std::size_t classify(std::span<double const> v) const;

 private:
  CellPartition partition_;
  int n_;
  std::vector<double> edges_;
};

SphereCapCells sphere_cap_cells(int n, int k);

struct ChiSquare {
  double statistic = 0;
  double threshold_99 = 0;
  int dof = 0;
  std::vector<std::size_t> observed;
  std::vector<double> expected;
  bool pass() const { return statistic < threshold_99; }
};

// 99th percentile of chi-square with `dof` degrees of freedom
// (Wilson-Hilferty; about 0.2% high at 9 dof).
double chi_square_threshold_99(int dof);

// Throws VerifyError for a zero-mass cell or an out-of-range observation.
ChiSquare chi_square_uniform(CellPartition const& cells,
                             std::span<std::size_t const> observations);

}  // namespace flagcount
