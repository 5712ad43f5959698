#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "flagcount/enumerate.hpp"
#include "flagcount/exact_lattice.hpp"

namespace fctest {

using namespace flagcount;

inline IntegerMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntegerMatrix m;
  for (auto const& r : rows) {
    IntegerVector v;
    for (long e : r) v.emplace_back(e);
    m.push_back(std::move(v));
  }
  return m;
}

inline PrimitiveLattice lat(std::initializer_list<std::initializer_list<long>> rows) {
  return PrimitiveLattice::from_basis(IntegerBasis(mat(rows)));
}

inline FlagChain flag(std::vector<int> partition, std::vector<PrimitiveLattice> proper) {
  std::size_t n = proper.empty() ? 0 : proper.front().ambient_dimension();
  if (n == 0) {
    for (int d : partition) n += static_cast<std::size_t>(d);
  }
  proper.push_back(PrimitiveLattice::whole_space(n));
  return FlagChain(std::move(partition), std::move(proper));
}

// Random unimodular n x n matrix from elementary row operations.
inline IntegerMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 12) {
  IntegerMatrix u(n, IntegerVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  if (n == 1) return u;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int s = 0; s < steps; ++s) {
    std::size_t const a = pick(rng);
    std::size_t b = pick(rng);
    if (a == b) b = (a + 1) % n;
    int const c = coef(rng);
    for (std::size_t k = 0; k < n; ++k) u[a][k] += c * u[b][k];
    if (s % 3 == 0) std::swap(u[a], u[b]);
  }
  return u;
}

inline IntegerMatrix multiply(IntegerMatrix const& a, IntegerMatrix const& b) {
  IntegerMatrix out(a.size(), IntegerVector(b.front().size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Brute-force flag oracle: chains of brute-force lattices ordered by
// containment, filtered by the height.  Every member has covol_sq at most
// bound_sq under either height, so that cap is safe.
inline std::vector<FlagChain> brute_force_flags(EnumerationJob const& job, int radius) {
  std::size_t const n = static_cast<std::size_t>(job.n);
  std::vector<std::vector<PrimitiveLattice>> by_level;
  int rank = 0;
  for (std::size_t j = 0; j + 1 < job.partition.size(); ++j) {
    rank += job.partition[j];
    by_level.push_back(brute_force_primitive_sublattices(RationalGram::identity(n), rank,
                                                         job.bound_sq, radius));
  }
  std::vector<FlagChain> out;
  std::vector<PrimitiveLattice> chain;
  auto rec = [&](auto&& self, std::size_t level) -> void {
    if (level == by_level.size()) {
      auto full = chain;
      full.push_back(PrimitiveLattice::whole_space(n));
      FlagChain f(job.partition, full);
      if (height(f, job.height) <= job.bound_sq) out.push_back(std::move(f));
      return;
    }
    for (auto const& l : by_level[level]) {
      if (!chain.empty() && !l.contains(chain.back())) continue;
      chain.push_back(l);
      self(self, level + 1);
      chain.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fctest
