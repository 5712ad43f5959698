#pragma once

// Fixed-width machinery behind the enumerator.  A frame is the quotient of a
// root lattice by the vectors picked so far, realized by orthogonal
// projection.  Its Gram matrix is q / denominator with q an exact int64
// matrix.  Floating point is only used to generate candidates; every
// acceptance decision is re-made exactly.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "flagcount/exact_lattice.hpp"

namespace flagcount::detail {

inline constexpr int kMaxDim = 8;

using Row = std::array<std::int64_t, kMaxDim>;
using Square = std::array<Row, kMaxDim>;

// q(y) = sum_i diag[i] * (y_i + sum_{j>i} mu[i][j] y_j)^2
struct Ldl {
  std::array<long double, kMaxDim> diag{};
  std::array<std::array<long double, kMaxDim>, kMaxDim> mu{};
};

struct Frame {
  int dim = 0;
  int root_dim = 0;
  Square q{};
  std::int64_t denominator = 1;
  std::vector<Row> basis;  // dim rows in root coordinates
  Square to_parent{};      // row a: basis vector a in parent-frame coordinates
  int parent_dim = 0;
  Rational covol_sq;       // of everything quotiented out, root metric
  Ldl ldl;
};

// Frame over the lattice spanned by `basis` (rows in root coordinates) whose
// Gram of projections is `gram`.  `covol_sq` is what has already been
// quotiented out (1 for a fresh root).
Frame make_frame(RationalMatrix const& gram, IntegerMatrix const& basis,
                 Rational covol_sq);

// Quotient of `f` by the primitive vector y (frame coordinates), norm = q(y).
Frame quotient(Frame const& f, Row const& y, std::int64_t norm);

std::int64_t exact_norm(Square const& q, int dim, Row const& y);
std::int64_t exact_bilinear(Square const& q, int dim, Row const& a, Row const& b);

// LLL (delta = 0.99) on an integer Gram matrix.  Replaces q by U q U^T and
// returns U.
Square lll_reduce(Square& q, int dim);
Ldl ldl_of(Square const& q, int dim);

// Sign normalization: last nonzero coordinate positive.
Row normalized(Row v, int dim);
// Lexicographic from coordinate 0.
int compare_rows(Row const& a, Row const& b, int dim);

// True iff basis[0] is a minimal vector of the lattice spanned by
// basis[0..rank) and is first among minimal vectors in the normalized order.
// All rows are in the coordinates of the Gram q.
bool is_canonical_first(Square const& q, int dim, Row const* basis, int rank);

// Row-style HNF of int64 rows, flattened.  Checked arithmetic.
std::vector<std::int64_t> hnf_key(std::vector<Row> rows, int n);

inline std::int64_t abs_gcd(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// Visits each nonzero y with last nonzero coordinate positive and
// nmin <= q(y) <= nmax, exactly once.  The visitor returns false to stop.
template <class Visit>
bool for_each_vector(Square const& q, Ldl const& ldl, int dim, std::int64_t nmin,
                     std::int64_t nmax, bool primitive_only, Visit&& visit) {
  if (nmax < nmin || nmax < 1) return true;
  long double const limit =
      static_cast<long double>(nmax) * (1.0L + 1e-12L) + 1e-6L;
  Row y{};
  std::array<long double, kMaxDim + 1> rem{};
  rem[dim] = limit;

  // Recursion over coordinates from dim-1 down to 0.
  auto rec = [&](auto&& self, int i, bool all_zero_above) -> bool {
    long double center = 0;
    for (int j = i + 1; j < dim; ++j) center -= ldl.mu[i][j] * static_cast<long double>(y[j]);
    long double const width = std::sqrt(std::max(rem[i + 1], 0.0L) / ldl.diag[i]);
    long double lo_f = std::ceil(center - width - 1e-9L);
    long double hi_f = std::floor(center + width + 1e-9L);
    if (hi_f > 1e15L || lo_f < -1e15L) throw OverflowError("candidate range too large");
    auto lo = static_cast<std::int64_t>(lo_f);
    auto const hi = static_cast<std::int64_t>(hi_f);
    if (all_zero_above) lo = std::max<std::int64_t>(lo, i == 0 ? 1 : 0);
    for (std::int64_t v = lo; v <= hi; ++v) {
      long double const t = static_cast<long double>(v) - center;
      long double const r = rem[i + 1] - ldl.diag[i] * t * t;
      if (r < -1e-9L * limit - 1e-9L) continue;
      y[i] = v;
      rem[i] = r;
      if (i == 0) {
        if (primitive_only) {
          std::int64_t g = 0;
          for (int j = 0; j < dim && g != 1; ++j) g = abs_gcd(g, y[j]);
          if (g != 1) continue;
        }
        std::int64_t const n = exact_norm(q, dim, y);
        if (n < nmin || n > nmax) continue;
        if (!visit(static_cast<Row const&>(y), n)) return false;
      } else if (!self(self, i - 1, all_zero_above && v == 0)) {
        return false;
      }
    }
    y[i] = 0;
    return true;
  };
  return rec(rec, dim - 1, true);
}

}  // namespace flagcount::detail
