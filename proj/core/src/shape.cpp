#include "flagcount/shape.hpp"

#include <cmath>

#include "Eigen/Dense"

namespace flagcount {
namespace {

Eigen::MatrixXd to_eigen(RealMatrix const& g) {
  Eigen::Index const n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g[static_cast<std::size_t>(i)].size() != g.size()) throw ShapeError("matrix not square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g[i][j];
  }
  return m;
}

RealMatrix from_eigen(Eigen::MatrixXd const& m) {
  RealMatrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

// Q R with diag(R) > 0.
void positive_qr(Eigen::MatrixXd const& g, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  q = qr.householderQ();
  r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1;
      q.col(i) *= -1;
    }
  }
}

void check_det_one(Eigen::MatrixXd const& g) {
  if (g.rows() == 0) throw ShapeError("empty matrix");
  double const det = g.determinant();
  if (std::fabs(det - 1) > 1e-9) throw ShapeError("determinant must be 1");
}

}  // namespace

IwasawaTriple iwasawa_decompose(RealMatrix const& g) {
  Eigen::MatrixXd const m = to_eigen(g);
  check_det_one(m);
  Eigen::MatrixXd q, r;
  positive_qr(m, q, r);
  IwasawaTriple out;
  out.a.resize(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (r(i, i) < 1e-12) throw ShapeError("matrix is near singular");
    out.a[i] = r(i, i);
    r.row(i) /= r(i, i);
  }
  out.k = from_eigen(q);
  out.n_upper = from_eigen(r);
  return out;
}

RefinedCoordinates refined_coordinates(RealMatrix const& g, Partition const& p) {
  Eigen::MatrixXd const m = to_eigen(g);
  if (m.rows() != p.n()) throw ShapeError("partition does not match matrix size");
  check_det_one(m);
  Eigen::MatrixXd q, r;
  positive_qr(m, q, r);
  std::vector<double> log_diag(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) {
    if (r(i, i) < 1e-12) throw ShapeError("leading minor is near singular");
    log_diag[i] = std::log(r(i, i));
  }
  RefinedCoordinates out;
  double t_prev = 0;
  double running = 0;  // log covol of the first D columns
  int start = 0;
  for (int j = 0; j < p.length(); ++j) {
    int const d = p[j];
    double block_total = 0;
    for (int i = 0; i < d; ++i) block_total += log_diag[start + i];
    double const t = running + block_total;
    std::vector<double> s;
    double partial = 0;
    for (int i = 1; i < d; ++i) {
      partial += log_diag[start + i - 1];
      s.push_back(2 * (i * (t - t_prev) / d - partial));
    }
    out.s.push_back(std::move(s));
    if (j + 1 < p.length()) out.t.push_back(t);
    t_prev = t;
    running = t;
    start += d;
  }
  return out;
}

ShapePoint2 shape2_reduce(RationalGram const& gram) {
  if (gram.dimension() != 2) throw ShapeError("shape2_reduce needs a 2x2 Gram matrix");
  Rational a = gram(0, 0);
  Rational b = gram(0, 1);
  Rational c = gram(1, 1);
  while (true) {
    // v2 -> v2 - t v1 with t the nearest integer to b / a.
    Integer const t = floor(b / a + Rational(1, 2));
    if (t != 0) {
      c = c - 2 * Rational(t) * b + Rational(t) * Rational(t) * a;
      b = b - Rational(t) * a;
    }
    if (c < a) {
      std::swap(a, c);
      b = -b;
      continue;
    }
    break;
  }
  if (2 * b == -a) {
    c = c + 2 * b + a;
    b = b + a;
  }
  if (a == c && b < 0) b = -b;
  ShapePoint2 out;
  out.x_exact = b / a;
  out.y_sq_exact = (a * c - b * b) / (a * a);
  out.x = out.x_exact.convert_to<double>();
  out.y = std::sqrt(out.y_sq_exact.convert_to<double>());
  return out;
}

std::vector<BlockShape> shape_vector(FlagChain const& f) {
  std::vector<BlockShape> out;
  for (std::size_t j = 1; j <= f.length(); ++j) {
    int const d = f.partition()[j - 1];
    BlockShape s;
    if (d == 1) {
      s.kind = BlockShape::Kind::Trivial;
    } else {
      RationalGram const g = quotient_factor_gram(f, j);
      if (d == 2) {
        s.kind = BlockShape::Kind::Point2;
        s.point = shape2_reduce(g);
      } else {
        s.kind = BlockShape::Kind::NonCanonical;
        double const scale = std::pow(g.determinant().convert_to<double>(), -1.0 / d);
        s.gram.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) s.gram[a][b] = g(a, b).convert_to<double>() * scale;
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Direction> direction(FlagChain const& f) {
  std::vector<Direction> out;
  std::size_t const n = f.ambient_dimension();
  for (std::size_t j = 1; j < f.length(); ++j) {
    // Reduced row echelon form over Q, unique for the subspace.
    auto const& rows = f.lattice(j).basis().rows();
    RationalMatrix m;
    for (auto const& row : rows) m.emplace_back(row.begin(), row.end());
    std::size_t lead = 0;
    for (std::size_t r = 0; r < m.size(); ++r) {
      while (lead < n) {
        std::size_t p = r;
        while (p < m.size() && m[p][lead] == 0) ++p;
        if (p < m.size()) {
          std::swap(m[p], m[r]);
          break;
        }
        ++lead;
      }
      Rational const pivot = m[r][lead];
      for (auto& e : m[r]) e /= pivot;
      for (std::size_t o = 0; o < m.size(); ++o) {
        if (o == r || m[o][lead] == 0) continue;
        Rational const factor = m[o][lead];
        for (std::size_t c = 0; c < n; ++c) m[o][c] -= factor * m[r][c];
      }
      ++lead;
    }
    // Gram-Schmidt in row order, summing coordinates left to right.
    RealMatrix frame;
    for (auto const& row : m) {
      std::vector<double> v(n);
      for (std::size_t c = 0; c < n; ++c) v[c] = row[c].convert_to<double>();
      for (auto const& u : frame) {
        double dot = 0;
        for (std::size_t c = 0; c < n; ++c) dot += v[c] * u[c];
        for (std::size_t c = 0; c < n; ++c) v[c] -= dot * u[c];
      }
      double norm = 0;
      for (double e : v) norm += e * e;
      norm = std::sqrt(norm);
      for (double& e : v) e /= norm;
      frame.push_back(std::move(v));
    }
    out.push_back(Direction{std::move(frame)});
  }
  return out;
}

RealMatrix projection_matrix(Direction const& d) {
  std::size_t const n = d.frame.empty() ? 0 : d.frame.front().size();
  RealMatrix p(n, std::vector<double>(n, 0.0));
  for (auto const& u : d.frame) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) p[a][b] += u[a] * u[b];
    }
  }
  return p;
}

}  // namespace flagcount
