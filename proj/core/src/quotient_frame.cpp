#include "flagcount/internal/quotient_frame.hpp"

#include <algorithm>
#include <utility>

namespace flagcount::detail {
namespace {

using checked::narrow;

constexpr std::int64_t kEntryLimit = std::int64_t{1} << 60;

struct Bezout64 {
  std::int64_t g, p, q;
};

Bezout64 extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t const quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
    old_t = std::exchange(t, old_t - quotient * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::int64_t to_i64(Integer const& v) { return to_int64(v); }

Square identity(int dim) {
  Square u{};
  for (int i = 0; i < dim; ++i) u[i][i] = 1;
  return u;
}

// out = a q a^T for `rows` rows of a.
Square congruence(Square const& q, int dim, Square const& a, int rows) {
  Square out{};
  for (int i = 0; i < rows; ++i) {
    std::array<__int128, kMaxDim> t{};
    for (int c = 0; c < dim; ++c) {
      __int128 s = 0;
      for (int k = 0; k < dim; ++k) s += static_cast<__int128>(a[i][k]) * q[k][c];
      t[c] = s;
    }
    for (int j = i; j < rows; ++j) {
      __int128 s = 0;
      for (int c = 0; c < dim; ++c) s += t[c] * a[j][c];
      out[i][j] = narrow(s);
      out[j][i] = out[i][j];
    }
  }
  return out;
}

void check_entries(Square const& q, int dim) {
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (q[i][j] >= kEntryLimit || q[i][j] <= -kEntryLimit) {
        throw OverflowError("quotient Gram entries too large");
      }
    }
  }
}

}  // namespace

std::int64_t exact_bilinear(Square const& q, int dim, Row const& a, Row const& b) {
  __int128 s = 0;
  for (int i = 0; i < dim; ++i) {
    if (a[i] == 0) continue;
    __int128 t = 0;
    for (int j = 0; j < dim; ++j) t += static_cast<__int128>(q[i][j]) * b[j];
    s += t * a[i];
  }
  return narrow(s);
}

std::int64_t exact_norm(Square const& q, int dim, Row const& y) {
  return exact_bilinear(q, dim, y, y);
}

Ldl ldl_of(Square const& q, int dim) {
  Ldl out;
  for (int i = 0; i < dim; ++i) {
    long double d = static_cast<long double>(q[i][i]);
    for (int k = 0; k < i; ++k) d -= out.diag[k] * out.mu[k][i] * out.mu[k][i];
    if (!(d > 0)) throw LatticeError("Gram matrix not positive definite");
    out.diag[i] = d;
    for (int j = i + 1; j < dim; ++j) {
      long double s = static_cast<long double>(q[i][j]);
      for (int k = 0; k < i; ++k) s -= out.diag[k] * out.mu[k][i] * out.mu[k][j];
      out.mu[i][j] = s / d;
    }
  }
  return out;
}

Square lll_reduce(Square& q, int dim) {
  Square u = identity(dim);
  if (dim <= 1) return u;
  long double const delta = 0.99L;
  // GSO in the row convention: mu[k][j] = <b_k, b*_j> / |b*_j|^2.
  std::array<std::array<long double, kMaxDim>, kMaxDim> mu{};
  std::array<long double, kMaxDim> bstar{};
  auto gso = [&](int upto) {
    for (int i = 0; i <= upto; ++i) {
      for (int j = 0; j < i; ++j) {
        long double s = static_cast<long double>(q[i][j]);
        for (int k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
        mu[i][j] = s / bstar[j];
      }
      long double s = static_cast<long double>(q[i][i]);
      for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
      bstar[i] = s;
    }
  };
  // b_k -= t b_j, exactly on q and u.
  auto subtract = [&](int k, int j, std::int64_t t) {
    std::int64_t const qkk = narrow(static_cast<__int128>(q[k][k]) -
                                    2 * static_cast<__int128>(t) * q[k][j] +
                                    static_cast<__int128>(t) * t * q[j][j]);
    for (int i = 0; i < dim; ++i) {
      if (i == k) continue;
      q[k][i] = narrow(static_cast<__int128>(q[k][i]) - static_cast<__int128>(t) * q[j][i]);
      q[i][k] = q[k][i];
    }
    q[k][k] = qkk;
    for (int c = 0; c < dim; ++c) {
      u[k][c] = narrow(static_cast<__int128>(u[k][c]) - static_cast<__int128>(t) * u[j][c]);
    }
  };
  int k = 1;
  gso(dim - 1);
  int guard = 0;
  while (k < dim) {
    if (++guard > 100000) throw OverflowError("lattice reduction did not terminate");
    for (int j = k - 1; j >= 0; --j) {
      long double const m = mu[k][j];
      if (std::fabs(m) <= 0.5L) continue;
      auto const t = static_cast<std::int64_t>(std::llround(m));
      subtract(k, j, t);
      for (int i = 0; i < j; ++i) mu[k][i] -= static_cast<long double>(t) * mu[j][i];
      mu[k][j] -= static_cast<long double>(t);
    }
    gso(k);
    if (bstar[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
      std::swap(q[k], q[k - 1]);
      for (int i = 0; i < dim; ++i) std::swap(q[i][k], q[i][k - 1]);
      std::swap(u[k], u[k - 1]);
      k = std::max(k - 1, 1);
      gso(dim - 1);
    } else {
      ++k;
    }
  }
  return u;
}

Frame make_frame(RationalMatrix const& gram, IntegerMatrix const& basis,
                 Rational covol_sq) {
  int const dim = static_cast<int>(gram.size());
  if (dim < 1 || dim > kMaxDim) throw LatticeError("frame dimension out of range");
  if (basis.size() != gram.size()) throw LatticeError("frame basis does not match Gram");
  int const root_dim = static_cast<int>(basis.front().size());
  if (root_dim > kMaxDim) throw LatticeError("ambient dimension out of range");

  Integer den = 1;
  for (auto const& row : gram) {
    for (auto const& e : row) den = boost::multiprecision::lcm(den, denominator(e));
  }
  Frame f;
  f.dim = dim;
  f.root_dim = root_dim;
  f.denominator = to_i64(den);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Rational const scaled = gram[i][j] * Rational(den);
      f.q[i][j] = to_i64(numerator(scaled));
    }
  }
  check_entries(f.q, dim);
  Square const u = lll_reduce(f.q, dim);
  f.basis.assign(dim, Row{});
  for (int a = 0; a < dim; ++a) {
    for (int c = 0; c < root_dim; ++c) {
      Integer s = 0;
      for (int b = 0; b < dim; ++b) s += Integer(u[a][b]) * basis[b][c];
      f.basis[a][c] = to_i64(s);
    }
  }
  f.to_parent = u;
  f.parent_dim = dim;
  f.covol_sq = std::move(covol_sq);
  f.ldl = ldl_of(f.q, dim);
  return f;
}

Frame quotient(Frame const& f, Row const& y, std::int64_t norm) {
  int const k = f.dim;
  if (k < 2) throw LatticeError("cannot quotient a rank-1 frame");
  // Column-reduce the row y to e_1, tracking W = V^{-1}; then W's first row
  // is y and its other rows complete it to a basis.
  Row r = y;
  Square w = identity(k);
  for (int c = 1; c < k; ++c) {
    if (r[c] == 0) continue;
    auto const [g, p, qq] = extended_gcd(r[0], r[c]);
    std::int64_t const xg = r[0] / g;
    std::int64_t const yg = r[c] / g;
    r[0] = g;
    r[c] = 0;
    for (int col = 0; col < k; ++col) {
      __int128 const a = w[0][col];
      __int128 const b = w[c][col];
      w[0][col] = narrow(xg * a + yg * b);
      w[c][col] = narrow(-qq * a + p * b);
    }
  }
  if (r[0] == -1) {
    for (int col = 0; col < k; ++col) w[0][col] = -w[0][col];
  } else if (r[0] != 1) {
    throw LatticeError("picked vector is not primitive");
  }

  Square const qw = congruence(f.q, k, w, k);
  int const m = k - 1;
  Square qn{};
  __int128 g = static_cast<__int128>(f.denominator) * norm;
  std::int64_t const den_raw = narrow(g);
  std::int64_t common = den_raw;
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      __int128 const v = static_cast<__int128>(qw[a + 1][b + 1]) * norm -
                         static_cast<__int128>(qw[0][a + 1]) * qw[0][b + 1];
      qn[a][b] = narrow(v);
      qn[b][a] = qn[a][b];
      common = abs_gcd(common, qn[a][b]);
    }
  }
  Frame out;
  out.dim = m;
  out.root_dim = f.root_dim;
  out.denominator = den_raw / common;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) qn[a][b] /= common;
  }
  check_entries(qn, m);
  Square const u = lll_reduce(qn, m);
  out.q = qn;
  // to_parent = U * W[1:]
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < k; ++c) {
      __int128 s = 0;
      for (int b = 0; b < m; ++b) s += static_cast<__int128>(u[a][b]) * w[b + 1][c];
      out.to_parent[a][c] = narrow(s);
    }
  }
  out.parent_dim = k;
  out.basis.assign(m, Row{});
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < f.root_dim; ++c) {
      __int128 s = 0;
      for (int b = 0; b < k; ++b) s += static_cast<__int128>(out.to_parent[a][b]) * f.basis[b][c];
      out.basis[a][c] = narrow(s);
    }
  }
  out.covol_sq = f.covol_sq * Rational(norm, f.denominator);
  out.ldl = ldl_of(out.q, m);
  return out;
}

Row normalized(Row v, int dim) {
  for (int i = dim - 1; i >= 0; --i) {
    if (v[i] == 0) continue;
    if (v[i] < 0) {
      for (int j = 0; j < dim; ++j) v[j] = -v[j];
    }
    break;
  }
  return v;
}

int compare_rows(Row const& a, Row const& b, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

bool is_canonical_first(Square const& q, int dim, Row const* basis, int rank) {
  Row const& first = basis[0];
  Row const first_n = normalized(first, dim);
  Square g{};
  Square b{};
  for (int i = 0; i < rank; ++i) b[i] = basis[i];
  g = congruence(q, dim, b, rank);
  std::int64_t const n = g[0][0];

  auto lower = [&](Row const& v) { return compare_rows(normalized(v, dim), first_n, dim) < 0; };

  if (rank == 2) {
    // Lagrange: size-reduce b1 against b0, then b0 is minimal iff |b1|^2 >= |b0|^2.
    std::int64_t const bb = g[0][1];
    // t = nearest integer to bb / n, ties toward floor.
    __int128 const twice = 2 * static_cast<__int128>(bb) + n;
    __int128 t128 = twice / (2 * static_cast<__int128>(n));
    if (twice % (2 * static_cast<__int128>(n)) != 0 && twice < 0) --t128;
    std::int64_t const t = narrow(t128);
    std::int64_t const b2 = narrow(static_cast<__int128>(bb) - static_cast<__int128>(t) * n);
    std::int64_t const c2 =
        narrow(static_cast<__int128>(g[1][1]) - 2 * static_cast<__int128>(t) * bb +
               static_cast<__int128>(t) * t * n);
    if (c2 < n) return false;
    if (c2 > n) return true;
    Row v{};
    for (int c = 0; c < dim; ++c) {
      v[c] = narrow(static_cast<__int128>(basis[1][c]) - static_cast<__int128>(t) * first[c]);
    }
    if (lower(v)) return false;
    if (2 * static_cast<__int128>(b2 < 0 ? -b2 : b2) == n) {
      std::int64_t const s = b2 > 0 ? 1 : -1;
      Row w2{};
      for (int c = 0; c < dim; ++c) w2[c] = narrow(static_cast<__int128>(v[c]) - s * first[c]);
      if (lower(w2)) return false;
    }
    return true;
  }

  Square const u = lll_reduce(g, rank);
  Ldl const l = ldl_of(g, rank);
  bool ok = true;
  for_each_vector(g, l, rank, 1, n, false, [&](Row const& z, std::int64_t norm) {
    if (norm < n) {
      ok = false;
      return false;
    }
    Row v{};
    for (int c = 0; c < dim; ++c) {
      __int128 s = 0;
      for (int a = 0; a < rank; ++a) {
        if (z[a] == 0) continue;
        __int128 lifted = 0;
        for (int bidx = 0; bidx < rank; ++bidx) lifted += static_cast<__int128>(u[a][bidx]) * basis[bidx][c];
        s += lifted * z[a];
      }
      v[c] = narrow(s);
    }
    if (lower(v)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

std::vector<std::int64_t> hnf_key(std::vector<Row> rows, int n) {
  std::size_t pivot_row = 0;
  for (int col = 0; col < n && pivot_row < rows.size(); ++col) {
    for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      auto const [g, p, q] = extended_gcd(rows[pivot_row][col], rows[r][col]);
      std::int64_t const xg = rows[pivot_row][col] / g;
      std::int64_t const yg = rows[r][col] / g;
      for (int c = col; c < n; ++c) {
        __int128 const a = rows[pivot_row][c];
        __int128 const b = rows[r][c];
        rows[pivot_row][c] = narrow(p * a + q * b);
        rows[r][c] = narrow(-yg * a + xg * b);
      }
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0) {
      for (int c = 0; c < n; ++c) rows[pivot_row][c] = -rows[pivot_row][c];
    }
    std::int64_t const pivot = rows[pivot_row][col];
    for (std::size_t r = 0; r < pivot_row; ++r) {
      std::int64_t quotient = rows[r][col] / pivot;
      if (rows[r][col] % pivot != 0 && rows[r][col] < 0) --quotient;
      if (quotient == 0) continue;
      for (int c = col; c < n; ++c) {
        rows[r][c] = narrow(static_cast<__int128>(rows[r][c]) -
                            static_cast<__int128>(quotient) * rows[pivot_row][c]);
      }
    }
    ++pivot_row;
  }
  if (pivot_row != rows.size()) throw LatticeError("not full rank");
  std::vector<std::int64_t> key;
  key.reserve(rows.size() * static_cast<std::size_t>(n));
  for (auto const& row : rows) key.insert(key.end(), row.begin(), row.begin() + n);
  return key;
}

}  // namespace flagcount::detail
