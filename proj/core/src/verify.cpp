#include "flagcount/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boost/math/distributions/normal.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace flagcount {

ExponentFit fit_exponent(std::span<CountRecord const> records) {
  if (records.size() < 3) throw VerifyError("fit_exponent needs at least 3 records");
  std::vector<double> lx, lc;
  for (auto const& r : records) {
    if (r.count == 0) throw VerifyError("fit_exponent needs positive counts");
    if (!(r.X > 0)) throw VerifyError("fit_exponent needs positive X");
    lx.push_back(std::log(r.X));
    lc.push_back(std::log(static_cast<double>(r.count)));
  }
  double const mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  double const mc = std::accumulate(lc.begin(), lc.end(), 0.0) / lc.size();
  double sxx = 0, sxc = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxc += (lx[i] - mx) * (lc[i] - mc);
  }
  if (sxx <= 0) throw VerifyError("fit_exponent needs distinct X values");
  ExponentFit fit;
  fit.slope = sxc / sxx;
  double const intercept = mc - fit.slope * mx;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::fabs(lc[i] - intercept - fit.slope * lx[i]));
  }
  return fit;
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw VerifyError("X must be finite");
  int exp = 0;
  double const mant = std::frexp(value, &exp);
  // mant * 2^53 is an integer.
  auto const scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational out(scaled);
  int const shift = exp - 53;
  if (shift >= 0) {
    out *= Rational(Integer(1) << shift);
  } else {
    out /= Rational(Integer(1) << -shift);
  }
  return out;
}

std::vector<CountRecord> ratio_table(Partition const& p, HeightKind height,
                                     std::span<double const> Xs, CountOptions const& options) {
  std::vector<CountRecord> out;
  for (std::size_t i = 0; i < Xs.size(); ++i) {
    if (i > 0 && !(Xs[i] > Xs[i - 1])) throw VerifyError("X values must increase");
    Rational const x = exact_rational(Xs[i]);
    EnumerationJob const job{p.n(), p.parts(), height, x * x};
    CountRecord r;
    r.X = Xs[i];
    r.count = count_flags(job, options).total;
    r.predicted = main_term(p, height, Real(Xs[i])).convert_to<double>();
    r.ratio = r.predicted > 0 ? static_cast<double>(r.count) / r.predicted : 0.0;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using boost::math::quadrature::gauss_kronrod;

// Area of {x in [x0, x1], max(arc, ylo) <= y < yhi} under dx dy / y^2, with
// yhi = 0 meaning infinity and ylo = 0 meaning the arc itself.
double band_area(double x0, double x1, double ylo, double yhi) {
  auto inner = [&](double x) {
    double const arc = std::sqrt(1 - x * x);
    double const lo = std::max(arc, ylo);
    double const top = yhi > 0 ? 1 / yhi : 0.0;
    return std::max(0.0, 1 / lo - top);
  };
  return gauss_kronrod<double, 31>::integrate(inner, x0, x1, 15, 1e-14);
}

}  // namespace

ModularCells::ModularCells(int k) {
  if (k < 2) throw VerifyError("modular_cells needs k >= 2");
  int const b = std::max(2, (k + 1) / 2);
  split_bands_ = k - b;
  std::vector<double> levels;  // Y_1 .. Y_{b-1}
  for (int j = 1; j < b; ++j) {
    levels.push_back(static_cast<double>(b) / (b - j));
    Rational const y(b, b - j);
    levels_sq_.push_back(y * y);
  }
  total_area_ = 2 * band_area(0, 0.5, 0, 0);
  for (int j = 0; j < b; ++j) {
    double const lo = j == 0 ? 0 : levels[j - 1];
    double const hi = j == b - 1 ? 0 : levels[j];
    std::string const range = "y in [" + (j == 0 ? std::string("arc") : std::to_string(lo)) + ", " +
                              (j == b - 1 ? std::string("inf") : std::to_string(hi)) + ")";
    if (j < split_bands_) {
      partition_.cells.push_back({range + ", |x| < 1/4", 2 * band_area(0, 0.25, lo, hi) / total_area_});
      partition_.cells.push_back({range + ", |x| >= 1/4", 2 * band_area(0.25, 0.5, lo, hi) / total_area_});
    } else {
      partition_.cells.push_back({range, 2 * band_area(0, 0.5, lo, hi) / total_area_});
    }
  }
}

std::size_t ModularCells::classify(ShapePoint2 const& p) const {
  std::size_t band = 0;
  while (band < levels_sq_.size() && p.y_sq_exact >= levels_sq_[band]) ++band;
  int const j = static_cast<int>(band);
  if (j < split_bands_) {
    bool const inner = p.x_exact * p.x_exact < Rational(1, 16);
    return static_cast<std::size_t>(2 * j + (inner ? 0 : 1));
  }
  return static_cast<std::size_t>(2 * split_bands_ + (j - split_bands_));
}

ModularCells modular_cells(int k) { return ModularCells(k); }

SphereCapCells::SphereCapCells(int n, int k) : n_(n) {
  if (n != 2 && n != 3) throw VerifyError("sphere_cap_cells supports n = 2 or 3");
  if (k < 2) throw VerifyError("sphere_cap_cells needs k >= 2");
  double const pi = std::acos(-1.0);
  for (int j = 1; j < k; ++j) {
    edges_.push_back(n == 3 ? static_cast<double>(j) / k : std::sin(j * pi / (2 * k)));
  }
  for (int j = 0; j < k; ++j) {
    std::string const coord = n == 3 ? "|z|" : "|y|";
    std::string const lo = j == 0 ? "0" : std::to_string(edges_[j - 1]);
    std::string const hi = j == k - 1 ? "1" : std::to_string(edges_[j]);
    partition_.cells.push_back({coord + " in [" + lo + ", " + hi + ")", 1.0 / k});
  }
}

std::size_t SphereCapCells::classify(std::span<double const> v) const {
  if (static_cast<int>(v.size()) != n_) throw VerifyError("vector has the wrong dimension");
  double norm = 0;
  for (double e : v) norm += e * e;
  double const c = std::fabs(v[static_cast<std::size_t>(n_ - 1)]) / std::sqrt(norm);
  return static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), c) - edges_.begin());
}

SphereCapCells sphere_cap_cells(int n, int k) { return SphereCapCells(n, k); }

double chi_square_threshold_99(int dof) {
  if (dof < 1) throw VerifyError("chi-square needs at least one degree of freedom");
  double const z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.99);
  double const k = dof;
  double const h = 2.0 / (9.0 * k);
  return k * std::pow(1 - h + z * std::sqrt(h), 3);
}

ChiSquare chi_square_uniform(CellPartition const& cells, std::span<std::size_t const> observations) {
  std::size_t const k = cells.cells.size();
  if (k < 2) throw VerifyError("chi-square needs at least two cells");
  ChiSquare out;
  out.observed.assign(k, 0);
  for (std::size_t o : observations) {
    if (o >= k) throw VerifyError("observation outside the cell range");
    ++out.observed[o];
  }
  double const n = static_cast<double>(observations.size());
  for (std::size_t i = 0; i < k; ++i) {
    double const m = cells.cells[i].mass;
    if (!(m > 0)) throw VerifyError("cell with zero mass");
    double const e = n * m;
    out.expected.push_back(e);
    double const diff = static_cast<double>(out.observed[i]) - e;
    out.statistic += diff * diff / e;
  }
  out.dof = static_cast<int>(k) - 1;
  out.threshold_99 = chi_square_threshold_99(out.dof);
  return out;
}

}  // namespace flagcount
