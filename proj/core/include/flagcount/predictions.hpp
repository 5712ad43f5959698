#pragma once

// Predicted constants, volumes and main terms for flag counts.

#include <vector>

#include "boost/multiprecision/cpp_bin_float.hpp"
#include "flagcount/enumerate.hpp"

namespace flagcount {

// 50 decimal digits; constants are good to at least 30.
using Real = boost::multiprecision::cpp_bin_float_50;

class Partition {
 public:
  // Throws std::invalid_argument on an empty partition or a part < 1.
  explicit Partition(std::vector<int> parts);

  std::vector<int> const& parts() const { return parts_; }
  int n() const { return n_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int operator[](int j) const { return parts_[static_cast<std::size_t>(j)]; }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

// Volume of the unit ball in R^i.
Real ball_volume(int i);

// Riemann zeta at an integer k >= 2: direct sum plus an Euler-Maclaurin tail.
Real zeta_value(int k);

// Asymptotic density of primitive d-lattices in Z^n by covolume.
Real schmidt_constant(int d, int n);

struct SpaceMasses {
  std::vector<Real> mass_L;  // per block
  std::vector<Real> mass_X;  // per block
  Real mass_Gr;              // oriented, including 2^(l-1)
  Real mass_P;
};
SpaceMasses space_masses(Partition const& p);

// Authoritative leading constant for flag counts.
Real flag_constant(Partition const& p);
// The closed form as it is usually printed.  Kept for comparison only: it
// gives pi/4 instead of 3/pi for (1,1).
Real flag_constant_literal(Partition const& p);

struct Prediction {
  HeightKind height;
  int exponent;
  Real coefficient;
  // AC: coefficient of (log X)^j for j = 0..l-2.
  std::vector<Real> log_poly;
};
Prediction predict(Partition const& p, HeightKind height);

// Throws std::invalid_argument for X < 1.
Real main_term(Partition const& p, HeightKind height, Real const& X);

// f_m(T) = e^T sum_{i<m} (-1)^(m-i-1) T^i / i! + (-1)^m.
Real f_closed(int m, Real const& T);
// Nested integral of e^(x_1+...+x_m) over the simplex sum x_i <= T, by
// recursive adaptive quadrature to about 1e-10 absolute.
double f_quadrature(int m, double T);

// Measure of the height set in the diagonal parameter space.
Real aprime_volume(Partition const& p, Real const& T, HeightKind height);

}  // namespace flagcount
