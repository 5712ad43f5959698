#pragma once

// Exact linear algebra over sublattices of Z^n.
//
// Bases are stored row-wise: row i of an r x n matrix is the i-th basis
// vector.  All arithmetic is exact (cpp_int / cpp_rational); nothing in this
// header touches floating point.

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flagcount/integer.hpp"

namespace flagcount {

namespace detail {
// Builds already-canonical values without re-validating them.  Only the
// enumerator uses it, on data it has proven canonical.
struct TrustedFactory;
}  // namespace detail

using IntegerVector = std::vector<Integer>;
using IntegerMatrix = std::vector<IntegerVector>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// r linearly independent integer rows of length n, 1 <= r <= n.
class IntegerBasis {
 public:
  // Throws LatticeError("not full rank") for dependent rows and
  // LatticeError on ragged or empty input.
  explicit IntegerBasis(IntegerMatrix rows);

  std::size_t rank() const { return rows_.size(); }
  std::size_t ambient_dimension() const { return rows_.front().size(); }
  IntegerMatrix const& rows() const { return rows_; }
  IntegerVector const& operator[](std::size_t i) const { return rows_[i]; }

  static IntegerBasis identity(std::size_t n);

  friend bool operator==(IntegerBasis const&, IntegerBasis const&) = default;
  // Lexicographic on the flattened entries.
  friend std::strong_ordering operator<=>(IntegerBasis const& a,
                                          IntegerBasis const& b);

 private:
  struct Trusted {};
  IntegerBasis(IntegerMatrix rows, Trusted) : rows_(std::move(rows)) {}
  friend class PrimitiveLattice;
  friend struct detail::TrustedFactory;
  friend IntegerBasis hnf_canonicalize(IntegerBasis const&);

  IntegerMatrix rows_;
};

// Exact symmetric positive-definite matrix.  Houses the factor lattices
// Lambda^(j) / Lambda^(j-1) and ambient lattices for enumeration.
class RationalGram {
 public:
  // Throws LatticeError unless square, symmetric and positive definite.
  explicit RationalGram(RationalMatrix entries);

  static RationalGram identity(std::size_t k);

  std::size_t dimension() const { return entries_.size(); }
  RationalMatrix const& entries() const { return entries_; }
  Rational const& operator()(std::size_t i, std::size_t j) const {
    return entries_[i][j];
  }
  Rational determinant() const;
  // x^T G x for an integer coordinate vector.
  Rational norm_sq(std::span<Integer const> x) const;

  friend bool operator==(RationalGram const&, RationalGram const&) = default;

 private:
  RationalMatrix entries_;
};

// A primitive sublattice of Z^n held by its row-style Hermite normal form.
class PrimitiveLattice {
 public:
  // Canonicalizes `basis`; throws LatticeError if the span is not primitive.
  static PrimitiveLattice from_basis(IntegerBasis const& basis);
  static PrimitiveLattice whole_space(std::size_t n);

  IntegerBasis const& basis() const { return basis_; }
  std::size_t rank() const { return basis_.rank(); }
  std::size_t ambient_dimension() const { return basis_.ambient_dimension(); }
  Rational covol_sq() const { return Rational(covol_sq_); }
  Integer const& covol_sq_integer() const { return covol_sq_; }

  // True iff v lies in the Z-span of the basis.
  bool contains(std::span<Integer const> v) const;
  bool contains(PrimitiveLattice const& other) const;

  friend bool operator==(PrimitiveLattice const& a, PrimitiveLattice const& b) {
    return a.basis_ == b.basis_;
  }
  friend std::strong_ordering operator<=>(PrimitiveLattice const& a,
                                          PrimitiveLattice const& b) {
    return a.basis_ <=> b.basis_;
  }

 private:
  friend struct detail::TrustedFactory;
  PrimitiveLattice(IntegerBasis hnf, Integer covol_sq)
      : basis_(std::move(hnf)), covol_sq_(std::move(covol_sq)) {}

  IntegerBasis basis_;
  Integer covol_sq_;
};

// Nested chain Lambda^(1) < ... < Lambda^(l) = Z^n of primitive lattices
// with rank jumps given by `partition`.  The trivial member {0} is implicit.
class FlagChain {
 public:
  // Validates ranks, nesting, primitivity and that the last member is Z^n.
  FlagChain(std::vector<int> partition, std::vector<PrimitiveLattice> lattices);

  std::vector<int> const& partition() const { return partition_; }
  std::size_t length() const { return lattices_.size(); }
  std::size_t ambient_dimension() const {
    return lattices_.back().ambient_dimension();
  }
  std::vector<PrimitiveLattice> const& lattices() const { return lattices_; }
  // j is 1-based to match the chain indexing; covol_sq(0) == 1.
  PrimitiveLattice const& lattice(std::size_t j) const {
    return lattices_.at(j - 1);
  }
  Rational covol_sq(std::size_t j) const;
  std::vector<Rational> covols_sq() const;

  friend bool operator==(FlagChain const& a, FlagChain const& b) {
    return a.lattices_ == b.lattices_;
  }
  friend std::strong_ordering operator<=>(FlagChain const& a,
                                          FlagChain const& b);

 private:
  friend struct detail::TrustedFactory;
  struct Trusted {};
  FlagChain(std::vector<int> partition, std::vector<PrimitiveLattice> lattices, Trusted)
      : partition_(std::move(partition)), lattices_(std::move(lattices)) {}

  std::vector<int> partition_;
  std::vector<PrimitiveLattice> lattices_;
};

namespace detail {
struct TrustedFactory {
  static IntegerBasis basis(IntegerMatrix rows) {
    return IntegerBasis(std::move(rows), IntegerBasis::Trusted{});
  }
  static PrimitiveLattice lattice(IntegerMatrix hnf_rows, Integer covol_sq) {
    return PrimitiveLattice(basis(std::move(hnf_rows)), std::move(covol_sq));
  }
  static FlagChain flag(std::vector<int> partition, std::vector<PrimitiveLattice> lattices) {
    return FlagChain(std::move(partition), std::move(lattices), FlagChain::Trusted{});
  }
};
}  // namespace detail

// Row-style HNF: positive pivots, entries above each pivot in [0, pivot).
IntegerBasis hnf_canonicalize(IntegerBasis const& m);

// HNF of an arbitrary integer matrix; zero rows are dropped, so the result
// has rank-many rows.
IntegerMatrix hermite_normal_form(IntegerMatrix rows);

bool is_primitive(IntegerBasis const& m);

// det(m m^T), exact.
Rational covol_sq(IntegerBasis const& m);

// Z^n intersected with the orthogonal complement of the span.
// Throws LatticeError("complement is zero") for full-rank input.
PrimitiveLattice orthogonal_complement(PrimitiveLattice const& p);

// Gram matrix of the projections of d_j vectors extending Lambda^(j-1) to
// Lambda^(j), projected orthogonally to span(Lambda^(j-1)).  j is 1-based.
RationalGram quotient_factor_gram(FlagChain const& f, std::size_t j);

// Unimodular n x n matrix whose first r rows span the same lattice as the
// r rows of `rows`.  Requires the rows to span a primitive lattice.
IntegerMatrix complete_to_unimodular(IntegerMatrix const& rows);

// Gram matrix B B^T.
IntegerMatrix gram(IntegerMatrix const& rows);

Integer determinant(IntegerMatrix m);
Rational determinant(RationalMatrix m);

// gcd of all maximal minors, via a unimodular column reduction.
Integer maximal_minor_gcd(IntegerMatrix const& rows);

}  // namespace flagcount
