#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "helpers.hpp"

using namespace flagcount;
using fctest::lat;

namespace {

std::vector<PrimitiveLattice> sorted(std::vector<PrimitiveLattice> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Sublattices, Examples) {
  auto const id2 = RationalGram::identity(2);
  EXPECT_EQ(sorted(enumerate_primitive_sublattices(id2, 1, 4)),
            sorted({lat({{1, 0}}), lat({{0, 1}}), lat({{1, 1}}), lat({{1, -1}})}));
  EXPECT_EQ(sorted(enumerate_primitive_sublattices(id2, 1, 1)), sorted({lat({{1, 0}}), lat({{0, 1}})}));
  EXPECT_EQ(sorted(enumerate_primitive_sublattices(RationalGram::identity(3), 2, 1)),
            sorted({lat({{1, 0, 0}, {0, 1, 0}}), lat({{1, 0, 0}, {0, 0, 1}}), lat({{0, 1, 0}, {0, 0, 1}})}));
}

TEST(Sublattices, BruteForceExamples) {
  auto const id2 = RationalGram::identity(2);
  EXPECT_EQ(sorted(brute_force_primitive_sublattices(id2, 1, 4, 2)),
            sorted({lat({{1, 0}}), lat({{0, 1}}), lat({{1, 1}}), lat({{1, -1}})}));
  EXPECT_EQ(brute_force_primitive_sublattices(id2, 1, 2, 2).size(), 4u);
  auto const z = brute_force_primitive_sublattices(RationalGram::identity(1), 1, 1, 1);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z.front(), PrimitiveLattice::whole_space(1));
}

TEST(Sublattices, MatchBruteForceOnSmallBounds) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (int r = 1; r <= std::min<int>(2, static_cast<int>(n)); ++r)
      for (int b = 1; b <= 16; ++b) {
        auto const fast = enumerate_primitive_sublattices(RationalGram::identity(n), r, b);
        auto const slow = brute_force_primitive_sublattices(RationalGram::identity(n), r, b, 4);
        ASSERT_EQ(sorted(fast), sorted(slow)) << "n=" << n << " r=" << r << " bound=" << b;
      }
}

TEST(Sublattices, NonIdentityAmbientMatchesBruteForce) {
  RationalGram const g({{Rational(2), Rational(1), Rational(0)},
                        {Rational(1), Rational(3), Rational(1, 2)},
                        {Rational(0), Rational(1, 2), Rational(5, 2)}});
  for (int r = 1; r <= 2; ++r)
    for (int b : {3, 7, 12}) {
      EXPECT_EQ(sorted(enumerate_primitive_sublattices(g, r, b)),
                sorted(brute_force_primitive_sublattices(g, r, b, 5)))
          << "r=" << r << " bound=" << b;
    }
}

TEST(Sublattices, Monotone) {
  auto const id = RationalGram::identity(3);
  auto prev = sorted(enumerate_primitive_sublattices(id, 2, 1));
  for (int b = 2; b <= 30; b += 3) {
    auto const next = sorted(enumerate_primitive_sublattices(id, 2, b));
    EXPECT_TRUE(std::includes(next.begin(), next.end(), prev.begin(), prev.end()));
    prev = next;
  }
}

TEST(Superlattices, Examples) {
  auto const z2 = enumerate_superlattices(lat({{1, 0}}), 2, 1);
  ASSERT_EQ(z2.size(), 1u);
  EXPECT_EQ(z2.front(), PrimitiveLattice::whole_space(2));
  EXPECT_EQ(sorted(enumerate_superlattices(lat({{1, 0, 0}}), 2, 4)),
            sorted({lat({{1, 0, 0}, {0, 1, 0}}), lat({{1, 0, 0}, {0, 0, 1}}), lat({{1, 0, 0}, {0, 1, 1}}),
                    lat({{1, 0, 0}, {0, 1, -1}})}));
  auto const same = enumerate_superlattices(lat({{1, 2, 0}}), 1, 5);
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same.front(), lat({{1, 2, 0}}));
}

TEST(Heights, Examples) {
  EXPECT_EQ(height_inf(fctest::flag({1, 1, 1}, {lat({{1, 0, 0}}), lat({{1, 0, 0}, {0, 1, 0}})})), 1);
  EXPECT_EQ(height_inf(fctest::flag({1, 1}, {lat({{1, 1}})})), 2);
  EXPECT_EQ(height_inf(fctest::flag({1, 1, 1}, {lat({{1, 2, 0}}), lat({{1, 2, 0}, {0, 0, 1}})})), 5);
  EXPECT_EQ(height_ac(fctest::flag({1, 1}, {lat({{1, 1}})})), 4);
  EXPECT_EQ(height_ac(fctest::flag({1, 1, 1}, {lat({{0, 0, 1}}), lat({{0, 1, 0}, {0, 0, 1}})})), 1);
  // covols_sq (2, 3)
  auto const f = fctest::flag({1, 1, 1}, {lat({{1, 1, 0}}), lat({{1, 1, 0}, {0, 1, 1}})});
  ASSERT_EQ(f.covol_sq(1), 2);
  ASSERT_EQ(f.covol_sq(2), 3);
  EXPECT_EQ(height_ac(f), 36);
}

TEST(Flags, Examples) {
  EXPECT_EQ(enumerate_flags({2, {1, 1}, HeightKind::INF, 4}).size(), 4u);
  EXPECT_EQ(enumerate_flags({2, {1, 1}, HeightKind::AC, 4}).size(), 4u);
  EXPECT_EQ(enumerate_flags({2, {1, 1}, HeightKind::INF, 1}).size(), 2u);
}

TEST(Flags, JobValidation) {
  EXPECT_THROW(enumerate_flags({2, {1, 2}, HeightKind::INF, 4}), std::invalid_argument);
  EXPECT_THROW(enumerate_flags({2, {1, 1}, HeightKind::INF, Rational(1, 2)}), std::invalid_argument);
  EXPECT_THROW(enumerate_flags({3, {0, 3}, HeightKind::INF, 4}), std::invalid_argument);
}

TEST(Flags, MatchBruteForceChains) {
  struct Case {
    int n;
    std::vector<int> partition;
    HeightKind height;
    int bound_sq;
  };
  for (auto const& c : std::vector<Case>{{3, {1, 1, 1}, HeightKind::INF, 6},
                                         {3, {1, 1, 1}, HeightKind::AC, 40},
                                         {3, {1, 2}, HeightKind::INF, 9},
                                         {3, {2, 1}, HeightKind::AC, 30},
                                         {2, {1, 1}, HeightKind::AC, 16},
                                         {3, {1, 2}, HeightKind::AC, 27}}) {
    EnumerationJob const job{c.n, c.partition, c.height, c.bound_sq};
    auto const fast = enumerate_flags(job);
    auto const slow = fctest::brute_force_flags(job, 4);
    EXPECT_EQ(fast, slow) << to_string(c.height) << " bound " << c.bound_sq;
    EXPECT_EQ(count_flags(job).total, fast.size());
  }
}

TEST(Flags, SortedAndValid) {
  EnumerationJob const job{4, {1, 2, 1}, HeightKind::INF, 5};
  auto const flags = enumerate_flags(job);
  ASSERT_FALSE(flags.empty());
  EXPECT_TRUE(std::is_sorted(flags.begin(), flags.end()));
  EXPECT_EQ(std::adjacent_find(flags.begin(), flags.end()), flags.end());
  for (auto const& f : flags) {
    // Re-running the validating constructor on the same members.
    EXPECT_NO_THROW(FlagChain(f.partition(), f.lattices()));
    EXPECT_LE(height_inf(f), job.bound_sq);
    for (auto const& l : f.lattices()) EXPECT_TRUE(is_primitive(l.basis()));
  }
}

TEST(Flags, MonotoneInBound) {
  auto const small = enumerate_flags({3, {1, 1, 1}, HeightKind::AC, 50});
  auto const big = enumerate_flags({3, {1, 1, 1}, HeightKind::AC, 200});
  EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  EXPECT_LT(small.size(), big.size());
}

TEST(Flags, DualityBijection) {
  for (auto kind : {HeightKind::INF, HeightKind::AC}) {
    for (int b : {4, 16, 49}) {
      auto const left = enumerate_flags({3, {1, 2}, kind, b});
      auto const right = enumerate_flags({3, {2, 1}, kind, b});
      ASSERT_EQ(left.size(), right.size());
      std::set<FlagChain> image;
      for (auto const& f : left) {
        FlagChain const d = dual_flag(f);
        EXPECT_EQ(d.partition(), (std::vector<int>{2, 1}));
        EXPECT_EQ(height_inf(d), height_inf(f));
        EXPECT_EQ(height_ac(d), height_ac(f));
        EXPECT_EQ(dual_flag(d), f);
        image.insert(d);
      }
      EXPECT_EQ(std::vector<FlagChain>(image.begin(), image.end()), right);
    }
  }
  auto const asym = enumerate_flags({4, {1, 2, 1}, HeightKind::AC, 30});
  for (auto const& f : asym) EXPECT_EQ(dual_flag(dual_flag(f)), f);
}

TEST(Flags, TwoStepAcIsInfToTheN) {
  for (auto const& part : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2}}) {
    int const n = std::accumulate(part.begin(), part.end(), 0);
    for (auto const& f : enumerate_flags({n, part, HeightKind::INF, 10})) {
      Rational pow = 1;
      for (int i = 0; i < n; ++i) pow *= height_inf(f);
      EXPECT_EQ(height_ac(f), pow);
    }
  }
}

TEST(Count, WorkersAndSplitAgree) {
  EnumerationJob const job{3, {1, 1, 1}, HeightKind::AC, 1024};
  auto const base = count_flags(job);
  EXPECT_EQ(count_flags(job, {3, false}).total, base.total);
  EXPECT_EQ(count_flags(job, {3, false}).per_level, base.per_level);
  EXPECT_EQ(count_flags(job, {1, true}).total, base.total);
  EXPECT_EQ(count_flags(job, {2, true}).total, base.total);
  EXPECT_EQ(enumerate_flags(job, EnumerateOptions{3}), enumerate_flags(job));

  EnumerationJob const inf{4, {1, 2, 1}, HeightKind::INF, 9};
  EXPECT_EQ(count_flags(inf, {1, true}).total, count_flags(inf).total);
  EXPECT_THROW(count_flags({3, {1, 2}, HeightKind::INF, 9}, {1, true}), std::invalid_argument);
}

TEST(Count, PerLevelCountsPrefixes) {
  EnumerationJob const job{3, {1, 1, 1}, HeightKind::INF, 5};
  auto const flags = enumerate_flags(job);
  std::set<PrimitiveLattice> firsts;
  for (auto const& f : flags) firsts.insert(f.lattice(1));
  auto const r = count_flags(job);
  ASSERT_EQ(r.per_level.size(), 2u);
  EXPECT_EQ(r.per_level[0], firsts.size());
  EXPECT_EQ(r.per_level[1], flags.size());
}

TEST(Count, HeightOneIsCoordinateFlags) {
  // Height 1 forces every member to be a coordinate subspace: n! / prod d_j!.
  EXPECT_EQ(count_flags({3, {1, 1, 1}, HeightKind::INF, 1}).total, 6u);
  EXPECT_EQ(count_flags({3, {1, 2}, HeightKind::AC, 1}).total, 3u);
  EXPECT_EQ(count_flags({4, {2, 2}, HeightKind::INF, 1}).total, 6u);
  EXPECT_EQ(count_flags({4, {1, 1, 1, 1}, HeightKind::INF, 1}).total, 24u);
}

TEST(Count, NonIntegerBound) {
  // X = 3/2: X^2 = 9/4, so only covol_sq in {1, 2}.
  EXPECT_EQ(count_flags({2, {1, 1}, HeightKind::INF, Rational(9, 4)}).total, 4u);
}
