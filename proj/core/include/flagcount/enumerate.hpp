#pragma once

// Complete, duplicate-free enumeration of primitive sublattices and flags of
// Z^n under a height bound.
//
// Every primitive lattice is reached through exactly one pick sequence: its
// first pick is the first minimal vector (in a fixed coordinate order) and
// the remaining picks describe the projection orthogonal to it, recursively.
// Nothing is deduplicated after the fact.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flagcount/exact_lattice.hpp"

namespace flagcount {

enum class HeightKind { INF, AC };

std::string to_string(HeightKind kind);
// Accepts "inf" or "ac".  Throws std::invalid_argument.
HeightKind parse_height_kind(std::string const& text);

struct EnumerationJob {
  int n = 0;
  std::vector<int> partition;
  HeightKind height = HeightKind::INF;
  Rational bound_sq = 1;  // X^2

  // Throws std::invalid_argument unless the parts are positive, sum to n and
  // bound_sq >= 1.
  void validate() const;
};

// Every primitive rank-r sublattice of the integer lattice with Gram
// `ambient` whose covol_sq (in that metric) is at most covol_sq_bound.
// Coordinates are the ambient ones.  Sorted by HNF basis.
std::vector<PrimitiveLattice> enumerate_primitive_sublattices(
    RationalGram const& ambient, int r, Rational const& covol_sq_bound);

// Exhaustive oracle over r-subsets of the box [-radius, radius]^k.
std::vector<PrimitiveLattice> brute_force_primitive_sublattices(
    RationalGram const& ambient, int r, Rational const& covol_sq_bound, int radius);

// Primitive lattices of rank new_rank containing `base` with covol_sq at most
// the bound.  For new_rank == rank(base) this is {base} when base is within
// the bound.
std::vector<PrimitiveLattice> enumerate_superlattices(PrimitiveLattice const& base,
                                                      int new_rank,
                                                      Rational const& covol_sq_bound);

// Squared heights.
Rational height_inf(FlagChain const& f);
Rational height_ac(FlagChain const& f);
Rational height(FlagChain const& f, HeightKind kind);

// Lambda'^(j) = (Lambda^(l-j))^perp, on the reversed partition.
FlagChain dual_flag(FlagChain const& f);

struct EnumerateOptions {
  int workers = 1;
};

// Streams flags with height^2 <= bound_sq in lexicographic order of the
// concatenated canonical bases.
void enumerate_flags(EnumerationJob const& job,
                     std::function<void(FlagChain const&)> const& sink,
                     EnumerateOptions const& options = {});
std::vector<FlagChain> enumerate_flags(EnumerationJob const& job,
                                       EnumerateOptions const& options = {});

struct CountOptions {
  int workers = 1;
  // For three-step partitions with d_1 == d_3, count only flags with
  // covol(Lambda^(1)) <= covol(Lambda^(2)) and recover the rest through the
  // duality involution.  Leaves per_level empty.
  bool duality_split = false;
};

struct CountResult {
  std::uint64_t total = 0;
  // per_level[j]: distinct prefixes (Lambda^(1), ..., Lambda^(j+1)) that
  // extend to at least one counted flag.
  std::vector<std::uint64_t> per_level;
};

CountResult count_flags(EnumerationJob const& job, CountOptions const& options = {});

}  // namespace flagcount
