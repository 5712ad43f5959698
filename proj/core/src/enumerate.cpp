#include "flagcount/enumerate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include "flagcount/internal/quotient_frame.hpp"

namespace flagcount {

using detail::Frame;
using detail::Row;
using detail::TrustedFactory;

namespace {

Rational rational_pow(Rational const& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

bool fits_int64(Rational const& v) {
  return denominator(v) == 1 && numerator(v) < INT64_MAX / 4 && numerator(v) > -(INT64_MAX / 4);
}

std::int64_t clamp_to_int64(Integer const& v) {
  if (v > INT64_MAX / 4) throw OverflowError("enumeration window too large");
  if (v < 0) return -1;
  return v.convert_to<std::int64_t>();
}

struct BlockBounds {
  Rational upper;
  std::optional<Rational> lower;
};

// Enumerates the canonical pick sequences of one block: every primitive
// rank-`rank` sublattice L of the start frame with
//   lower <= covol_sq(already picked) * covol_sq(L) <= upper.
template <class Leaf>
class BlockSearch {
 public:
  BlockSearch(Frame const& start, int rank, BlockBounds const& bounds, Leaf& leaf,
              int shard = 0, int shards = 1)
      : start_(start), rank_(rank), bounds_(bounds), leaf_(leaf), shard_(shard),
        shards_(shards), frames_(static_cast<std::size_t>(rank)),
        picks_(static_cast<std::size_t>(rank)), norms_(static_cast<std::size_t>(rank), 0) {
    if (rank < 1 || rank > start.dim) throw LatticeError("block rank out of range");
  }

  void run() { descend(0); }

  int rank() const { return rank_; }
  Row const& pick(int i) const { return picks_[i]; }
  std::int64_t norm(int i) const { return norms_[i]; }
  Frame const& frame(int i) const { return i == 0 ? start_ : frames_[i]; }
  std::int64_t tie_norm() const { return tie_norm_; }

  Rational end_covol_sq() const {
    Frame const& f = frame(rank_ - 1);
    return f.covol_sq * Rational(norms_[rank_ - 1], f.denominator);
  }
  Frame end_frame() const {
    return detail::quotient(frame(rank_ - 1), picks_[rank_ - 1], norms_[rank_ - 1]);
  }
  // Picks lifted to root coordinates.
  std::vector<Row> lifted() const {
    std::vector<Row> out(static_cast<std::size_t>(rank_), Row{});
    for (int i = 0; i < rank_; ++i) {
      Frame const& f = frame(i);
      for (int c = 0; c < f.root_dim; ++c) {
        __int128 s = 0;
        for (int a = 0; a < f.dim; ++a) s += static_cast<__int128>(picks_[i][a]) * f.basis[a][c];
        out[i][c] = checked::narrow(s);
      }
    }
    return out;
  }

 private:
  std::pair<std::int64_t, std::int64_t> window(int i) {
    Frame const& f = frame(i);
    int const rr = rank_ - i;
    std::int64_t nmax = 0;
    if (rr == 1 && fits_int64(bounds_.upper) && fits_int64(f.covol_sq)) {
      __int128 const num = static_cast<__int128>(numerator(bounds_.upper).convert_to<std::int64_t>()) *
                           f.denominator;
      __int128 const c = numerator(f.covol_sq).convert_to<std::int64_t>();
      __int128 const q = num / c;
      if (q > INT64_MAX / 4) throw OverflowError("enumeration window too large");
      nmax = static_cast<std::int64_t>(q);
    } else {
      Rational const cap = bounds_.upper / f.covol_sq;
      if (rr == 1) {
        nmax = clamp_to_int64(floor(cap * f.denominator));
      } else {
        Rational const radicand =
            rational_pow(Rational(f.denominator), rr) * hermite_constant_power(rr) * cap;
        nmax = clamp_to_int64(floor_root(radicand, rr));
      }
    }
    std::int64_t nmin = 1;
    if (i > 0) {
      // The projection of a lattice orthogonal to its shortest vector has
      // minimum at least 3/4 of that vector's norm.
      Frame const& prev = frame(i - 1);
      __int128 const num = 3 * static_cast<__int128>(norms_[i - 1]) * f.denominator;
      __int128 const den = 4 * static_cast<__int128>(prev.denominator);
      nmin = std::max<std::int64_t>(nmin, checked::narrow((num + den - 1) / den));
    }
    tie_norm_ = -1;
    if (rr == 1 && bounds_.lower) {
      Rational const r = *bounds_.lower * f.denominator / f.covol_sq;
      nmin = std::max(nmin, clamp_to_int64(ceil(r)));
      if (denominator(r) == 1) tie_norm_ = numerator(r).convert_to<std::int64_t>();
    }
    return {nmin, nmax};
  }

  void descend(int i) {
    auto const [nmin, nmax] = window(i);
    if (nmax < nmin) return;
    Frame const& f = frame(i);
    std::int64_t index = 0;
    detail::for_each_vector(f.q, f.ldl, f.dim, nmin, nmax, true,
                            [&](Row const& y, std::int64_t n) {
                              if (i == 0 && shards_ > 1 && (index++ % shards_) != shard_) return true;
                              picks_[i] = y;
                              norms_[i] = n;
                              if (i + 1 == rank_) {
                                if (rank_ == 1 || canonical()) leaf_(*this);
                              } else {
                                frames_[i + 1] = detail::quotient(f, y, n);
                                descend(i + 1);
                              }
                              return true;
                            });
  }

  // Each pick must be the first minimal vector of the lattice it starts.
  bool canonical() const {
    std::array<Row, detail::kMaxDim> rows{};
    for (int level = rank_ - 2; level >= 0; --level) {
      int const r = rank_ - level;
      rows[0] = picks_[level];
      for (int t = 1; t < r; ++t) {
        Row v = picks_[level + t];
        for (int g = level + t; g > level; --g) {
          Frame const& fg = frame(g);
          Row up{};
          for (int c = 0; c < fg.parent_dim; ++c) {
            __int128 s = 0;
            for (int a = 0; a < fg.dim; ++a) s += static_cast<__int128>(v[a]) * fg.to_parent[a][c];
            up[c] = checked::narrow(s);
          }
          v = up;
        }
        rows[t] = v;
      }
      Frame const& f = frame(level);
      if (!detail::is_canonical_first(f.q, f.dim, rows.data(), r)) return false;
    }
    return true;
  }

  Frame const& start_;
  int rank_;
  BlockBounds const& bounds_;
  Leaf& leaf_;
  int shard_;
  int shards_;
  std::vector<Frame> frames_;  // frames_[0] unused; frame(0) is start_
  std::vector<Row> picks_;
  std::vector<std::int64_t> norms_;
  std::int64_t tie_norm_ = -1;
};

template <class Leaf>
void search_block(Frame const& start, int rank, BlockBounds const& bounds, Leaf leaf,
                  int shard = 0, int shards = 1) {
  BlockSearch<Leaf> s(start, rank, bounds, leaf, shard, shards);
  s.run();
}

IntegerMatrix to_integer_matrix(std::vector<Row> const& rows, int n) {
  IntegerMatrix out(rows.size(), IntegerVector(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < n; ++c) out[i][static_cast<std::size_t>(c)] = rows[i][c];
  }
  return out;
}

IntegerMatrix key_to_matrix(std::vector<std::int64_t> const& key, int n) {
  std::size_t const r = key.size() / static_cast<std::size_t>(n);
  IntegerMatrix out(r, IntegerVector(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < r; ++i) {
    for (int c = 0; c < n; ++c) out[i][static_cast<std::size_t>(c)] = key[i * n + c];
  }
  return out;
}

std::vector<Row> key_to_rows(std::vector<std::int64_t> const& key, int n) {
  std::size_t const r = key.size() / static_cast<std::size_t>(n);
  std::vector<Row> out(r, Row{});
  for (std::size_t i = 0; i < r; ++i) {
    for (int c = 0; c < n; ++c) out[i][c] = key[i * n + c];
  }
  return out;
}

// Gram of the projections of `ext` orthogonal to span(`base`), exact.
RationalMatrix projected_gram(IntegerMatrix const& base, IntegerMatrix const& ext) {
  std::size_t const n = ext.front().size();
  auto dot = [](RationalVector const& a, RationalVector const& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  std::vector<RationalVector> ortho;
  for (auto const& row : base) {
    RationalVector v(row.begin(), row.end());
    for (auto const& u : ortho) {
      Rational const f = dot(v, u) / dot(u, u);
      for (std::size_t c = 0; c < n; ++c) v[c] -= f * u[c];
    }
    ortho.push_back(std::move(v));
  }
  std::vector<RationalVector> proj;
  for (auto const& row : ext) {
    RationalVector v(row.begin(), row.end());
    for (auto const& u : ortho) {
      Rational const f = dot(v, u) / dot(u, u);
      for (std::size_t c = 0; c < n; ++c) v[c] -= f * u[c];
    }
    proj.push_back(std::move(v));
  }
  RationalMatrix g(proj.size(), RationalVector(proj.size()));
  for (std::size_t a = 0; a < proj.size(); ++a) {
    for (std::size_t b = a; b < proj.size(); ++b) {
      g[a][b] = dot(proj[a], proj[b]);
      g[b][a] = g[a][b];
    }
  }
  return g;
}

Frame root_frame(int n) {
  IntegerMatrix id(static_cast<std::size_t>(n), IntegerVector(static_cast<std::size_t>(n), 0));
  RationalMatrix g(static_cast<std::size_t>(n), RationalVector(static_cast<std::size_t>(n), 0));
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    id[i][i] = 1;
    g[i][i] = 1;
  }
  return detail::make_frame(g, id, Rational(1));
}

// Budgets per block for flag searches.
struct Policy {
  HeightKind kind;
  Rational bound_sq;
  std::vector<int> parts;
  bool split = false;

  int blocks() const { return static_cast<int>(parts.size()) - 1; }
  int exponent(int j) const { return parts[j] + parts[j + 1]; }

  // prefix: prod_{i<j} covol_sq_i^{e_i}; first: covol_sq of the first block.
  BlockBounds bounds(int j, Rational const& prefix, Rational const& first) const {
    BlockBounds b;
    if (kind == HeightKind::INF) {
      b.upper = Rational(floor(bound_sq));
    } else if (split && j == 0) {
      b.upper = Rational(floor_root(bound_sq, 2 * exponent(0)));
    } else {
      b.upper = Rational(floor_root(bound_sq / prefix, exponent(j)));
    }
    if (split && j == 1) b.lower = first;
    return b;
  }
};

class Counter {
 public:
  explicit Counter(Policy const& policy)
      : policy_(policy), per_level_(static_cast<std::size_t>(policy.blocks()), 0) {}

  std::uint64_t count(Frame const& f, int j, Rational const& prefix, Rational const& first,
                      int shard, int shards) {
    BlockBounds const b = policy_.bounds(j, prefix, first);
    std::uint64_t total = 0;
    int const rank = policy_.parts[static_cast<std::size_t>(j)];
    if (j == policy_.blocks() - 1) {
      std::uint64_t ties = 0;
      search_block(
          f, rank, b,
          [&](auto const& s) {
            ++total;
            if (policy_.split && s.norm(s.rank() - 1) == s.tie_norm()) ++ties;
          },
          shard, shards);
      per_level_[static_cast<std::size_t>(j)] += total;
      if (policy_.split) total = 2 * total - ties;
      return total;
    }
    search_block(
        f, rank, b,
        [&](auto const& s) {
          Rational const c = s.end_covol_sq();
          Frame const e = s.end_frame();
          std::uint64_t const sub =
              count(e, j + 1, prefix * rational_pow(c, policy_.exponent(j)), j == 0 ? c : first, 0, 1);
          if (sub > 0) {
            ++per_level_[static_cast<std::size_t>(j)];
            total += sub;
          }
        },
        shard, shards);
    return total;
  }

  std::vector<std::uint64_t> const& per_level() const { return per_level_; }

 private:
  Policy const& policy_;
  std::vector<std::uint64_t> per_level_;
};

Policy make_policy(EnumerationJob const& job, bool split) {
  return Policy{job.height, job.bound_sq, job.partition, split};
}

// Sorted depth-first emission.
class Emitter {
 public:
  Emitter(Policy const& policy, int n) : policy_(policy), n_(n) {}

  struct Child {
    std::vector<std::int64_t> key;
    std::vector<Row> picks;
    std::vector<std::int64_t> norms;
    Rational covol_sq;
  };

  std::vector<Child> children(Frame const& f, int j, std::vector<Row> const& prefix_rows,
                              Rational const& prefix) const {
    BlockBounds const b = policy_.bounds(j, prefix, Rational(0));
    bool const last = j == policy_.blocks() - 1;
    std::vector<Child> out;
    search_block(f, policy_.parts[static_cast<std::size_t>(j)], b, [&](auto const& s) {
      std::vector<Row> rows = prefix_rows;
      auto const lifted = s.lifted();
      rows.insert(rows.end(), lifted.begin(), lifted.end());
      Child c{detail::hnf_key(std::move(rows), n_), {}, {}, s.end_covol_sq()};
      if (!last) {
        for (int i = 0; i < s.rank(); ++i) {
          c.picks.push_back(s.pick(i));
          c.norms.push_back(s.norm(i));
        }
      }
      out.push_back(std::move(c));
    });
    std::sort(out.begin(), out.end(), [](Child const& a, Child const& b) { return a.key < b.key; });
    return out;
  }

  // Everything below `child` at block j, in order.
  void expand(Frame const& f, int j, Child const& child, Rational const& prefix,
              std::vector<PrimitiveLattice>& chain,
              std::function<void(FlagChain const&)> const& sink) const {
    chain.push_back(TrustedFactory::lattice(key_to_matrix(child.key, n_), numerator(child.covol_sq)));
    if (j == policy_.blocks() - 1) {
      std::vector<PrimitiveLattice> lattices = chain;
      lattices.push_back(PrimitiveLattice::whole_space(static_cast<std::size_t>(n_)));
      sink(TrustedFactory::flag(policy_.parts, std::move(lattices)));
    } else {
      Frame e = f;
      for (std::size_t i = 0; i < child.picks.size(); ++i) {
        e = detail::quotient(e, child.picks[i], child.norms[i]);
      }
      Rational const next_prefix = prefix * rational_pow(child.covol_sq, policy_.exponent(j));
      auto const rows = key_to_rows(child.key, n_);
      for (auto const& grandchild : children(e, j + 1, rows, next_prefix)) {
        expand(e, j + 1, grandchild, next_prefix, chain, sink);
      }
    }
    chain.pop_back();
  }

 private:
  Policy const& policy_;
  int n_;
};

FlagChain whole_space_flag(int n) {
  return TrustedFactory::flag({n}, {PrimitiveLattice::whole_space(static_cast<std::size_t>(n))});
}

// Bareiss determinant of a small int64 matrix.
Integer small_determinant(std::vector<std::vector<std::int64_t>> const& m) {
  IntegerMatrix big(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) big[i].assign(m[i].begin(), m[i].end());
  return determinant(std::move(big));
}

}  // namespace

std::string to_string(HeightKind kind) { return kind == HeightKind::INF ? "inf" : "ac"; }

HeightKind parse_height_kind(std::string const& text) {
  if (text == "inf") return HeightKind::INF;
  if (text == "ac") return HeightKind::AC;
  throw std::invalid_argument("height must be inf or ac, got '" + text + "'");
}

void EnumerationJob::validate() const {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (partition.empty()) throw std::invalid_argument("partition is empty");
  int sum = 0;
  for (int d : partition) {
    if (d < 1) throw std::invalid_argument("partition parts must be positive");
    sum += d;
  }
  if (sum != n) throw std::invalid_argument("partition does not sum to n");
  if (n > detail::kMaxDim) throw std::invalid_argument("n out of supported range");
  if (bound_sq < 1) throw std::invalid_argument("bound_sq must be at least 1");
}

std::vector<PrimitiveLattice> enumerate_primitive_sublattices(RationalGram const& ambient, int r,
                                                              Rational const& covol_sq_bound) {
  int const k = static_cast<int>(ambient.dimension());
  if (r < 1 || r > k) throw LatticeError("rank out of range");
  IntegerMatrix id(static_cast<std::size_t>(k), IntegerVector(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < id.size(); ++i) id[i][i] = 1;
  Frame const root = detail::make_frame(ambient.entries(), id, Rational(1));
  BlockBounds const b{covol_sq_bound, std::nullopt};
  std::vector<PrimitiveLattice> out;
  search_block(root, r, b, [&](auto const& s) {
    out.push_back(PrimitiveLattice::from_basis(IntegerBasis(to_integer_matrix(s.lifted(), k))));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimitiveLattice> brute_force_primitive_sublattices(RationalGram const& ambient, int r,
                                                                Rational const& covol_sq_bound,
                                                                int radius) {
  int const k = static_cast<int>(ambient.dimension());
  if (r < 1 || r > k || radius < 1) return {};
  Integer den = 1;
  for (auto const& row : ambient.entries()) {
    for (auto const& e : row) den = boost::multiprecision::lcm(den, denominator(e));
  }
  std::vector<std::vector<std::int64_t>> q(static_cast<std::size_t>(k),
                                           std::vector<std::int64_t>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) q[i][j] = to_int64(numerator(ambient(i, j) * Rational(den)));
  }
  // det(B q B^T) <= bound * den^r
  Integer const threshold = floor(covol_sq_bound * rational_pow(Rational(den), r));

  std::vector<std::vector<std::int64_t>> box;
  std::vector<std::int64_t> v(static_cast<std::size_t>(k), -radius);
  while (true) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t e) { return e != 0; })) box.push_back(v);
    int i = 0;
    while (i < k && v[i] == radius) v[i++] = -radius;
    if (i == k) break;
    ++v[i];
  }

  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::size_t> idx(static_cast<std::size_t>(r));
  auto bilinear = [&](std::vector<std::int64_t> const& a, std::vector<std::int64_t> const& b) {
    std::int64_t s = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) s += a[i] * q[i][j] * b[j];
    }
    return s;
  };
  auto visit = [&]() {
    std::vector<std::vector<std::int64_t>> g(static_cast<std::size_t>(r),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(r)));
    for (int a = 0; a < r; ++a) {
      for (int b = a; b < r; ++b) {
        g[a][b] = bilinear(box[idx[a]], box[idx[b]]);
        g[b][a] = g[a][b];
      }
    }
    Integer const det = small_determinant(g);
    if (det <= 0 || det > threshold) return;
    IntegerMatrix rows(static_cast<std::size_t>(r));
    std::vector<Row> fixed(static_cast<std::size_t>(r), Row{});
    for (int a = 0; a < r; ++a) {
      rows[a].assign(box[idx[a]].begin(), box[idx[a]].end());
      for (int c = 0; c < k; ++c) fixed[a][c] = box[idx[a]][c];
    }
    if (maximal_minor_gcd(rows) != 1) return;
    seen.insert(detail::hnf_key(std::move(fixed), k));
  };
  // r-subsets of the box in increasing index order.
  auto rec = [&](auto&& self, int depth, std::size_t from) -> void {
    if (depth == r) {
      visit();
      return;
    }
    for (std::size_t i = from; i < box.size(); ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);

  std::vector<PrimitiveLattice> out;
  for (auto const& key : seen) {
    out.push_back(PrimitiveLattice::from_basis(IntegerBasis(key_to_matrix(key, k))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimitiveLattice> enumerate_superlattices(PrimitiveLattice const& base, int new_rank,
                                                      Rational const& covol_sq_bound) {
  int const r = static_cast<int>(base.rank());
  int const n = static_cast<int>(base.ambient_dimension());
  if (new_rank < r || new_rank > n) throw LatticeError("new rank out of range");
  if (new_rank == r) {
    if (base.covol_sq() <= covol_sq_bound) return {base};
    return {};
  }
  IntegerMatrix const& rows = base.basis().rows();
  IntegerMatrix const w = complete_to_unimodular(rows);
  IntegerMatrix const ext(w.begin() + r, w.end());
  Frame const start = detail::make_frame(projected_gram(rows, ext), ext, base.covol_sq());
  BlockBounds const b{covol_sq_bound, std::nullopt};
  std::vector<PrimitiveLattice> out;
  search_block(start, new_rank - r, b, [&](auto const& s) {
    IntegerMatrix all = rows;
    for (auto const& row : to_integer_matrix(s.lifted(), n)) all.push_back(row);
    out.push_back(PrimitiveLattice::from_basis(IntegerBasis(std::move(all))));
  });
  std::sort(out.begin(), out.end());
  return out;
}

Rational height_inf(FlagChain const& f) {
  Rational best = 1;
  for (auto const& l : f.lattices()) best = std::max(best, l.covol_sq());
  return best;
}

Rational height_ac(FlagChain const& f) {
  auto const& d = f.partition();
  Rational out = 1;
  for (std::size_t i = 1; i < f.length(); ++i) {
    out *= rational_pow(f.covol_sq(i), d[i - 1] + d[i]);
  }
  return out;
}

Rational height(FlagChain const& f, HeightKind kind) {
  return kind == HeightKind::INF ? height_inf(f) : height_ac(f);
}

FlagChain dual_flag(FlagChain const& f) {
  std::size_t const l = f.length();
  std::vector<int> partition(f.partition().rbegin(), f.partition().rend());
  std::vector<PrimitiveLattice> lattices;
  for (std::size_t j = 1; j < l; ++j) lattices.push_back(orthogonal_complement(f.lattice(l - j)));
  lattices.push_back(PrimitiveLattice::whole_space(f.ambient_dimension()));
  return FlagChain(std::move(partition), std::move(lattices));
}

void enumerate_flags(EnumerationJob const& job, std::function<void(FlagChain const&)> const& sink,
                     EnumerateOptions const& options) {
  job.validate();
  if (job.partition.size() == 1) {
    sink(whole_space_flag(job.n));
    return;
  }
  Policy const policy = make_policy(job, false);
  Emitter const emitter(policy, job.n);
  Frame const root = root_frame(job.n);
  auto const top = emitter.children(root, 0, {}, Rational(1));
  int const workers = std::max(1, options.workers);
  if (workers == 1) {
    std::vector<PrimitiveLattice> chain;
    for (auto const& child : top) emitter.expand(root, 0, child, Rational(1), chain, sink);
    return;
  }
  // Workers expand disjoint first-level subtrees; output is replayed in order.
  std::size_t const window = static_cast<std::size_t>(workers) * 16;
  for (std::size_t begin = 0; begin < top.size(); begin += window) {
    std::size_t const end = std::min(top.size(), begin + window);
    std::vector<std::vector<FlagChain>> buffers(end - begin);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        std::vector<PrimitiveLattice> chain;
        for (std::size_t i = begin + static_cast<std::size_t>(w); i < end;
             i += static_cast<std::size_t>(workers)) {
          auto& buf = buffers[i - begin];
          emitter.expand(root, 0, top[i], Rational(1), chain,
                         [&buf](FlagChain const& f) { buf.push_back(f); });
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto const& buf : buffers) {
      for (auto const& f : buf) sink(f);
    }
  }
}

std::vector<FlagChain> enumerate_flags(EnumerationJob const& job, EnumerateOptions const& options) {
  std::vector<FlagChain> out;
  enumerate_flags(job, [&](FlagChain const& f) { out.push_back(f); }, options);
  return out;
}

CountResult count_flags(EnumerationJob const& job, CountOptions const& options) {
  job.validate();
  CountResult result;
  if (job.partition.size() == 1) {
    result.total = 1;
    return result;
  }
  bool const split = options.duality_split;
  if (split && (job.partition.size() != 3 || job.partition[0] != job.partition[2])) {
    throw std::invalid_argument("duality split needs a partition (a, b, a)");
  }
  Policy const policy = make_policy(job, split);
  Frame const root = root_frame(job.n);
  int const workers = std::max(1, options.workers);
  std::vector<CountResult> partial(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    Counter counter(policy);
    partial[w].total = counter.count(root, 0, Rational(1), Rational(0), w, workers);
    partial[w].per_level = counter.per_level();
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  result.per_level.assign(static_cast<std::size_t>(policy.blocks()), 0);
  for (auto const& p : partial) {
    result.total += p.total;
    for (std::size_t j = 0; j < p.per_level.size(); ++j) result.per_level[j] += p.per_level[j];
  }
  if (split) result.per_level.clear();
  return result;
}

}  // namespace flagcount
