#pragma once

// Iwasawa coordinates, shapes and directions of flags.
//
// Real matrices act on column vectors; the columns of g are a basis.

#include <vector>

#include "flagcount/exact_lattice.hpp"
#include "flagcount/predictions.hpp"

namespace flagcount {

using RealMatrix = std::vector<std::vector<double>>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// g = k * diag(a) * n_upper with k orthogonal, a > 0, n_upper unit upper
// triangular.
struct IwasawaTriple {
  RealMatrix k;
  std::vector<double> a;
  RealMatrix n_upper;
};

// Householder QR with the signs fixed so the diagonal is positive.
// Throws ShapeError unless |det g - 1| <= 1e-9 and g is well conditioned.
IwasawaTriple iwasawa_decompose(RealMatrix const& g);

struct RefinedCoordinates {
  std::vector<double> t;                    // t_1 .. t_{l-1}
  std::vector<std::vector<double>> s;       // s^(j), length d_j - 1
};

// t_j = log covol of the first D_j columns; s^(j)_i is defined by
//   exp(i (t_j - t_{j-1}) / d_j - s_i / 2) = covol of the first i columns
// of block j projected away from the earlier blocks.
RefinedCoordinates refined_coordinates(RealMatrix const& g, Partition const& p);

// A point of the standard fundamental domain for SL_2(Z):
// x in (-1/2, 1/2], x^2 + y^2 >= 1, and x >= 0 on the unit circle.
struct ShapePoint2 {
  double x = 0;
  double y = 1;
  // Exact values for binning.
  Rational x_exact = 0;
  Rational y_sq_exact = 1;
};

// Exact Gauss reduction of the form [[a,b],[b,c]].
ShapePoint2 shape2_reduce(RationalGram const& gram);

struct BlockShape {
  enum class Kind { Trivial, Point2, NonCanonical };
  Kind kind = Kind::Trivial;
  ShapePoint2 point;   // Point2 only
  RealMatrix gram;     // NonCanonical only: quotient Gram scaled to det 1
};

std::vector<BlockShape> shape_vector(FlagChain const& f);

// Orthonormal frame (rows) of the span of Lambda^(j), canonical for the
// subspace: Gram-Schmidt applied to its reduced row echelon form.  For rank
// 1 this is the unit vector with first nonzero coordinate positive.
struct Direction {
  RealMatrix frame;
};

std::vector<Direction> direction(FlagChain const& f);

RealMatrix projection_matrix(Direction const& d);

}  // namespace flagcount
