#include "flagcount/exact_lattice.hpp"

#include <algorithm>
#include <utility>

namespace flagcount {
namespace {

// Extended gcd: returns (g, p, q) with p*a + q*b = g >= 0.
struct Bezout {
  Integer g, p, q;
};

Bezout extended_gcd(Integer const& a, Integer const& b) {
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (r != 0) {
    Integer const quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
    old_t = std::exchange(t, old_t - quotient * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Floor division for a possibly negative numerator and positive divisor.
Integer floor_div(Integer const& a, Integer const& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_rectangular(IntegerMatrix const& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw LatticeError("empty basis");
  }
  for (auto const& row : rows) {
    if (row.size() != rows.front().size()) throw LatticeError("ragged basis");
  }
}

// Column reduction A V = [H | 0] with H lower triangular and V unimodular.
// Also returns V^{-1}.  Throws LatticeError("not full rank") if the rows are
// dependent.
struct ColumnReduction {
  IntegerMatrix reduced;  // A V
  IntegerMatrix v;
  IntegerMatrix v_inverse;
};

ColumnReduction column_reduce(IntegerMatrix const& a) {
  std::size_t const r = a.size();
  std::size_t const n = a.front().size();
  ColumnReduction out{a, IntegerMatrix(n, IntegerVector(n, 0)),
                      IntegerMatrix(n, IntegerVector(n, 0))};
  for (std::size_t i = 0; i < n; ++i) {
    out.v[i][i] = 1;
    out.v_inverse[i][i] = 1;
  }
  auto& m = out.reduced;
  for (std::size_t i = 0; i < r; ++i) {
    if (i >= n) throw LatticeError("not full rank");
    // Bring a nonzero entry into column i.
    std::size_t pivot = n;
    for (std::size_t c = i; c < n; ++c) {
      if (m[i][c] != 0) {
        pivot = c;
        break;
      }
    }
    if (pivot == n) throw LatticeError("not full rank");
    if (pivot != i) {
      for (auto& row : m) std::swap(row[i], row[pivot]);
      for (auto& row : out.v) std::swap(row[i], row[pivot]);
      std::swap(out.v_inverse[i], out.v_inverse[pivot]);
    }
    for (std::size_t c = i + 1; c < n; ++c) {
      if (m[i][c] == 0) continue;
      Integer const x = m[i][i];
      Integer const y = m[i][c];
      auto const [g, p, q] = extended_gcd(x, y);
      Integer const xg = x / g;
      Integer const yg = y / g;
      // [col_i, col_c] <- [col_i, col_c] * [[p, -yg], [q, xg]]
      auto const combine_columns = [&](IntegerMatrix& mat) {
        for (auto& row : mat) {
          Integer const ci = row[i];
          Integer const cc = row[c];
          row[i] = p * ci + q * cc;
          row[c] = -yg * ci + xg * cc;
        }
      };
      combine_columns(m);
      combine_columns(out.v);
      // Inverse acts on rows: [row_i; row_c] <- [[xg, yg], [-q, p]] [row_i; row_c]
      auto& wi = out.v_inverse[i];
      auto& wc = out.v_inverse[c];
      for (std::size_t k = 0; k < n; ++k) {
        Integer const ri = wi[k];
        Integer const rc = wc[k];
        wi[k] = xg * ri + yg * rc;
        wc[k] = -q * ri + p * rc;
      }
    }
  }
  return out;
}

Rational dot(RationalVector const& a, RationalVector const& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RationalVector to_rational(IntegerVector const& v) {
  return RationalVector(v.begin(), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// IntegerBasis

IntegerBasis::IntegerBasis(IntegerMatrix rows) : rows_(std::move(rows)) {
  check_rectangular(rows_);
  if (rows_.size() > rows_.front().size()) throw LatticeError("not full rank");
  if (hermite_normal_form(rows_).size() != rows_.size()) {
    throw LatticeError("not full rank");
  }
}

IntegerBasis IntegerBasis::identity(std::size_t n) {
  IntegerMatrix rows(n, IntegerVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
  return IntegerBasis(std::move(rows), Trusted{});
}

std::strong_ordering operator<=>(IntegerBasis const& a, IntegerBasis const& b) {
  if (auto c = a.rank() <=> b.rank(); c != 0) return c;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (std::size_t j = 0; j < a.rows_[i].size() && j < b.rows_[i].size(); ++j) {
      if (a.rows_[i][j] < b.rows_[i][j]) return std::strong_ordering::less;
      if (a.rows_[i][j] > b.rows_[i][j]) return std::strong_ordering::greater;
    }
  }
  return a.ambient_dimension() <=> b.ambient_dimension();
}

// ---------------------------------------------------------------------------
// RationalGram

RationalGram::RationalGram(RationalMatrix entries) : entries_(std::move(entries)) {
  std::size_t const k = entries_.size();
  if (k == 0) throw LatticeError("empty Gram matrix");
  for (std::size_t i = 0; i < k; ++i) {
    if (entries_[i].size() != k) throw LatticeError("Gram matrix not square");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (entries_[i][j] != entries_[j][i]) {
        throw LatticeError("Gram matrix not symmetric");
      }
    }
  }
  // Positive definite iff every pivot of the LDL^T elimination is positive.
  RationalMatrix m = entries_;
  for (std::size_t i = 0; i < k; ++i) {
    if (m[i][i] <= 0) throw LatticeError("Gram matrix not positive definite");
    for (std::size_t r = i + 1; r < k; ++r) {
      Rational const f = m[r][i] / m[i][i];
      for (std::size_t c = i; c < k; ++c) m[r][c] -= f * m[i][c];
    }
  }
}

RationalGram RationalGram::identity(std::size_t k) {
  RationalMatrix m(k, RationalVector(k, 0));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return RationalGram(std::move(m));
}

Rational RationalGram::determinant() const { return flagcount::determinant(entries_); }

Rational RationalGram::norm_sq(std::span<Integer const> x) const {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] == 0) continue;
      s += entries_[i][j] * x[i] * x[j];
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Hermite normal form

IntegerMatrix hermite_normal_form(IntegerMatrix rows) {
  if (rows.empty()) return rows;
  std::size_t const n = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < n && pivot_row < rows.size(); ++col) {
    // Fold every row below into pivot_row with gcd steps.
    for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      Integer const x = rows[pivot_row][col];
      Integer const y = rows[r][col];
      auto const [g, p, q] = extended_gcd(x, y);
      Integer const xg = x / g;
      Integer const yg = y / g;
      auto& a = rows[pivot_row];
      auto& b = rows[r];
      for (std::size_t c = col; c < n; ++c) {
        Integer const ac = a[c];
        Integer const bc = b[c];
        a[c] = p * ac + q * bc;
        b[c] = -yg * ac + xg * bc;
      }
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0) {
      for (auto& e : rows[pivot_row]) e = -e;
    }
    Integer const& pivot = rows[pivot_row][col];
    for (std::size_t r = 0; r < pivot_row; ++r) {
      Integer const q = floor_div(rows[r][col], pivot);
      if (q == 0) continue;
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= q * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

IntegerBasis hnf_canonicalize(IntegerBasis const& m) {
  return IntegerBasis(hermite_normal_form(m.rows()), IntegerBasis::Trusted{});
}

Integer maximal_minor_gcd(IntegerMatrix const& rows) {
  check_rectangular(rows);
  auto const red = column_reduce(rows);
  Integer d = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) d *= red.reduced[i][i];
  return abs(d);
}

bool is_primitive(IntegerBasis const& m) { return maximal_minor_gcd(m.rows()) == 1; }

IntegerMatrix gram(IntegerMatrix const& rows) {
  std::size_t const r = rows.size();
  IntegerMatrix g(r, IntegerVector(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      Integer s = 0;
      for (std::size_t c = 0; c < rows[i].size(); ++c) s += rows[i][c] * rows[j][c];
      g[i][j] = s;
      g[j][i] = s;
    }
  }
  return g;
}

Integer determinant(IntegerMatrix m) {
  // Bareiss fraction-free elimination.
  std::size_t const k = m.size();
  if (k == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (m[i][i] == 0) {
      std::size_t swap_with = i + 1;
      while (swap_with < k && m[swap_with][i] == 0) ++swap_with;
      if (swap_with == k) return 0;
      std::swap(m[i], m[swap_with]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < k; ++r) {
      for (std::size_t c = i + 1; c < k; ++c) {
        m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
      }
    }
    prev = m[i][i];
  }
  return sign * m[k - 1][k - 1];
}

Rational determinant(RationalMatrix m) {
  std::size_t const k = m.size();
  Rational det = 1;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t p = i;
    while (p < k && m[p][i] == 0) ++p;
    if (p == k) return 0;
    if (p != i) {
      std::swap(m[p], m[i]);
      det = -det;
    }
    det *= m[i][i];
    for (std::size_t r = i + 1; r < k; ++r) {
      if (m[r][i] == 0) continue;
      Rational const f = m[r][i] / m[i][i];
      for (std::size_t c = i; c < k; ++c) m[r][c] -= f * m[i][c];
    }
  }
  return det;
}

Rational covol_sq(IntegerBasis const& m) { return Rational(determinant(gram(m.rows()))); }

// ---------------------------------------------------------------------------
// PrimitiveLattice

PrimitiveLattice PrimitiveLattice::from_basis(IntegerBasis const& basis) {
  if (!is_primitive(basis)) throw LatticeError("basis does not span a primitive lattice");
  IntegerBasis hnf = hnf_canonicalize(basis);
  Integer c = determinant(gram(hnf.rows()));
  return PrimitiveLattice(std::move(hnf), std::move(c));
}

PrimitiveLattice PrimitiveLattice::whole_space(std::size_t n) {
  return PrimitiveLattice(IntegerBasis::identity(n), Integer(1));
}

bool PrimitiveLattice::contains(std::span<Integer const> v) const {
  if (v.size() != ambient_dimension()) return false;
  IntegerVector rest(v.begin(), v.end());
  std::size_t col = 0;
  for (auto const& row : basis_.rows()) {
    while (row[col] == 0) {
      if (rest[col] != 0) return false;
      ++col;
    }
    if (rest[col] % row[col] != 0) return false;
    Integer const q = rest[col] / row[col];
    for (std::size_t c = col; c < rest.size(); ++c) rest[c] -= q * row[c];
    ++col;
  }
  return std::all_of(rest.begin(), rest.end(), [](Integer const& e) { return e == 0; });
}

bool PrimitiveLattice::contains(PrimitiveLattice const& other) const {
  return std::all_of(other.basis().rows().begin(), other.basis().rows().end(),
                     [&](IntegerVector const& row) { return contains(row); });
}

// ---------------------------------------------------------------------------
// FlagChain

FlagChain::FlagChain(std::vector<int> partition, std::vector<PrimitiveLattice> lattices)
    : partition_(std::move(partition)), lattices_(std::move(lattices)) {
  if (partition_.empty() || partition_.size() != lattices_.size()) {
    throw LatticeError("flag length does not match partition");
  }
  std::size_t const n = lattices_.front().ambient_dimension();
  std::size_t rank = 0;
  for (std::size_t j = 0; j < partition_.size(); ++j) {
    if (partition_[j] < 1) throw LatticeError("partition parts must be positive");
    rank += static_cast<std::size_t>(partition_[j]);
    if (lattices_[j].ambient_dimension() != n || lattices_[j].rank() != rank) {
      throw LatticeError("flag member has the wrong rank");
    }
    if (j > 0 && !lattices_[j].contains(lattices_[j - 1])) {
      throw LatticeError("flag members are not nested");
    }
  }
  if (rank != n || lattices_.back().basis() != IntegerBasis::identity(n)) {
    throw LatticeError("last flag member must be Z^n");
  }
}

Rational FlagChain::covol_sq(std::size_t j) const {
  if (j == 0) return Rational(1);
  return lattice(j).covol_sq();
}

std::vector<Rational> FlagChain::covols_sq() const {
  std::vector<Rational> out;
  out.reserve(lattices_.size());
  for (auto const& l : lattices_) out.push_back(l.covol_sq());
  return out;
}

std::strong_ordering operator<=>(FlagChain const& a, FlagChain const& b) {
  return std::lexicographical_compare_three_way(a.lattices_.begin(), a.lattices_.end(),
                                                b.lattices_.begin(), b.lattices_.end());
}

// ---------------------------------------------------------------------------
// Complements and factor lattices

IntegerMatrix complete_to_unimodular(IntegerMatrix const& rows) {
  check_rectangular(rows);
  auto red = column_reduce(rows);
  Integer det = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) det *= red.reduced[i][i];
  if (abs(det) != 1) throw LatticeError("rows do not span a primitive lattice");
  return std::move(red.v_inverse);
}

PrimitiveLattice orthogonal_complement(PrimitiveLattice const& p) {
  std::size_t const r = p.rank();
  std::size_t const n = p.ambient_dimension();
  if (r == n) throw LatticeError("complement is zero");
  auto const red = column_reduce(p.basis().rows());
  // Columns r..n-1 of V span the integer kernel of B, and that kernel is
  // saturated, hence primitive.
  IntegerMatrix kernel(n - r, IntegerVector(n));
  for (std::size_t k = r; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) kernel[k - r][i] = red.v[i][k];
  }
  return PrimitiveLattice::from_basis(IntegerBasis(std::move(kernel)));
}

RationalGram quotient_factor_gram(FlagChain const& f, std::size_t j) {
  if (j < 1 || j > f.length()) throw LatticeError("factor index out of range");
  IntegerMatrix const& outer = f.lattice(j).basis().rows();
  if (j == 1) {
    auto const g = gram(outer);
    RationalMatrix out(g.size(), RationalVector(g.size()));
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = 0; b < g.size(); ++b) out[a][b] = Rational(g[a][b]);
    }
    return RationalGram(std::move(out));
  }
  IntegerMatrix const& inner = f.lattice(j - 1).basis().rows();
  std::size_t const big = outer.size();
  std::size_t const small = inner.size();
  std::size_t const n = f.ambient_dimension();

  // Coordinates of the inner basis with respect to the outer HNF basis.
  // Both are in echelon form, so solve row by row by back-substitution on
  // pivot columns.
  std::vector<std::size_t> pivots;
  for (auto const& row : outer) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    pivots.push_back(c);
  }
  IntegerMatrix coords(small, IntegerVector(big, 0));
  for (std::size_t s = 0; s < small; ++s) {
    IntegerVector rest = inner[s];
    for (std::size_t b = 0; b < big; ++b) {
      Integer const& pv = outer[b][pivots[b]];
      if (rest[pivots[b]] % pv != 0) throw LatticeError("flag members are not nested");
      Integer const q = rest[pivots[b]] / pv;
      coords[s][b] = q;
      for (std::size_t c = 0; c < n; ++c) rest[c] -= q * outer[b][c];
    }
  }
  IntegerMatrix const completion = complete_to_unimodular(coords);

  // Extension vectors: completion rows small..big-1 mapped through `outer`.
  std::vector<RationalVector> ext;
  for (std::size_t e = small; e < big; ++e) {
    RationalVector w(n, 0);
    for (std::size_t b = 0; b < big; ++b) {
      if (completion[e][b] == 0) continue;
      for (std::size_t c = 0; c < n; ++c) w[c] += Rational(completion[e][b] * outer[b][c]);
    }
    ext.push_back(std::move(w));
  }
  // Project off span(inner) with exact Gram-Schmidt.
  std::vector<RationalVector> ortho;
  for (auto const& row : inner) {
    RationalVector v = to_rational(row);
    for (auto const& u : ortho) {
      Rational const f = dot(v, u) / dot(u, u);
      for (std::size_t c = 0; c < n; ++c) v[c] -= f * u[c];
    }
    ortho.push_back(std::move(v));
  }
  for (auto& w : ext) {
    for (auto const& u : ortho) {
      Rational const f = dot(w, u) / dot(u, u);
      for (std::size_t c = 0; c < n; ++c) w[c] -= f * u[c];
    }
  }
  RationalMatrix out(ext.size(), RationalVector(ext.size()));
  for (std::size_t a = 0; a < ext.size(); ++a) {
    for (std::size_t b = a; b < ext.size(); ++b) {
      out[a][b] = dot(ext[a], ext[b]);
      out[b][a] = out[a][b];
    }
  }
  return RationalGram(std::move(out));
}

}  // namespace flagcount
