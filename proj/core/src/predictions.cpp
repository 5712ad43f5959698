#include "flagcount/predictions.hpp"

#include <stdexcept>

#include "boost/math/constants/constants.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "boost/math/special_functions/bernoulli.hpp"

namespace flagcount {
namespace {

Real pi() { return boost::math::constants::pi<Real>(); }

Real factorial(int k) {
  Real out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

Real multinomial(Partition const& p) {
  Real out = factorial(p.n());
  for (int d : p.parts()) out /= factorial(d);
  return out;
}

// prod_{i=2}^{k} zeta(i)
Real zeta_product(int k) {
  Real out = 1;
  for (int i = 2; i <= k; ++i) out *= zeta_value(i);
  return out;
}

// prod_{i=1}^{k} V(i)
Real ball_product(int k) {
  Real out = 1;
  for (int i = 1; i <= k; ++i) out *= ball_volume(i);
  return out;
}

Real exponent_product(Partition const& p) {
  Real out = 1;
  for (int j = 0; j + 1 < p.length(); ++j) out *= p[j] + p[j + 1];
  return out;
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("partition is empty");
  for (int d : parts_) {
    if (d < 1) throw std::invalid_argument("partition parts must be positive");
    n_ += d;
  }
}

Real ball_volume(int i) {
  if (i < 1) throw std::invalid_argument("ball dimension must be positive");
  Real a = 2;     // V(1)
  Real b = pi();  // V(2)
  if (i == 1) return a;
  for (int k = 3; k <= i; ++k) {
    Real const next = a * 2 * pi() / k;
    a = b;
    b = next;
  }
  return b;
}

Real zeta_value(int k) {
  if (k < 2) throw std::invalid_argument("zeta needs k >= 2");
  // With N = 100 and twenty correction terms the remainder is far below the
  // working precision for every k >= 2.
  constexpr int N = 100;
  constexpr int terms = 20;
  Real sum = 0;
  for (int j = N - 1; j >= 1; --j) sum += pow(Real(j), -k);
  Real const nn = N;
  sum += pow(nn, 1 - k) / (k - 1) + pow(nn, -k) / 2;
  // sum_j B_2j / (2j)! * k (k+1) ... (k+2j-2) * N^(-k-2j+1)
  Real rising = k;  // k (k+1) ... (k+2j-2)
  for (int j = 1; j <= terms; ++j) {
    if (j > 1) rising *= Real(k + 2 * j - 3) * (k + 2 * j - 2);
    sum += boost::math::bernoulli_b2n<Real>(j) / factorial(2 * j) * rising *
           pow(nn, -k - 2 * j + 1);
  }
  return sum;
}

Real schmidt_constant(int d, int n) {
  if (d < 1 || d >= n) throw std::invalid_argument("schmidt_constant needs 1 <= d < n");
  Real binom = factorial(n) / (factorial(d) * factorial(n - d));
  Real zeta_num = zeta_product(d);
  Real zeta_den = 1;
  for (int i = n - d + 1; i <= n; ++i) zeta_den *= zeta_value(i);
  Real ball_num = 1;
  for (int i = n - d + 1; i <= n; ++i) ball_num *= ball_volume(i);
  Real const ball_den = ball_product(d);
  return binom / n * zeta_num / zeta_den * ball_num / ball_den;
}

SpaceMasses space_masses(Partition const& p) {
  SpaceMasses out;
  for (int d : p.parts()) {
    out.mass_L.push_back(zeta_product(d));
    Real const iota = d % 2 == 0 ? 2 : 1;
    Real den = 1;
    for (int i = 1; i <= d; ++i) den *= i * ball_volume(i);
    out.mass_X.push_back(2 * iota * zeta_product(d) / den);
  }
  Real gr = pow(Real(2), p.length() - 1) * multinomial(p) * ball_product(p.n());
  for (int d : p.parts()) gr /= ball_product(d);
  out.mass_Gr = gr;
  out.mass_P = gr;
  for (auto const& m : out.mass_L) out.mass_P *= m;
  return out;
}

Real flag_constant(Partition const& p) {
  Real zeta_ratio = 1 / zeta_product(p.n());
  Real ball_ratio = ball_product(p.n());
  for (int d : p.parts()) {
    zeta_ratio *= zeta_product(d);
    ball_ratio /= ball_product(d);
  }
  return multinomial(p) * zeta_ratio * ball_ratio / exponent_product(p);
}

Real flag_constant_literal(Partition const& p) {
  int const l = p.length();
  Real out = 1 / (pow(Real(2), l - 1) * exponent_product(p)) * multinomial(p);
  for (int i = 0; i + 1 < l; ++i) out *= zeta_product(p[i]);
  out /= zeta_product(p[l - 1]);
  for (int i = p[l - 1] + 1; i <= p.n(); ++i) out *= ball_volume(i);
  for (int i = 0; i + 1 < l; ++i) out /= ball_product(p[i]);
  return out;
}

Prediction predict(Partition const& p, HeightKind height) {
  Prediction out{height, 0, flag_constant(p), {}};
  int const l = p.length();
  if (height == HeightKind::INF) {
    out.exponent = 2 * p.n() - p[0] - p[l - 1];
  } else {
    out.exponent = 1;
    for (int j = 0; j <= l - 2; ++j) {
      Real c = 1 / factorial(j);
      if ((l - 2 - j) % 2 != 0) c = -c;
      out.log_poly.push_back(c);
    }
  }
  return out;
}

Real main_term(Partition const& p, HeightKind height, Real const& X) {
  if (X < 1) throw std::invalid_argument("main_term needs X >= 1");
  Prediction const pr = predict(p, height);
  if (height == HeightKind::INF) return pr.coefficient * pow(X, pr.exponent);
  Real const lx = log(X);
  Real poly = 0;
  Real power = 1;
  for (auto const& c : pr.log_poly) {
    poly += c * power;
    power *= lx;
  }
  return pr.coefficient * X * poly;
}

Real f_closed(int m, Real const& T) {
  if (m < 0) throw std::invalid_argument("f_closed needs m >= 0");
  Real sum = 0;
  Real term = 1;  // T^i / i!
  for (int i = 0; i < m; ++i) {
    sum += (m - i - 1) % 2 == 0 ? term : Real(-term);
    term *= T / (i + 1);
  }
  return exp(T) * sum + (m % 2 == 0 ? 1 : -1);
}

namespace {

// Adaptive bisection on an absolute error budget.  A panel is also accepted
// once its error estimate reaches rounding level: the integrand may itself be
// a quadrature result, and chasing that noise only multiplies the cost.
template <class F>
double adaptive_gk(F const& f, double a, double b, double tol, int depth) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  double l1 = 0;
  double const value = gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err, &l1);
  double const noise = 256 * std::numeric_limits<double>::epsilon() * l1;
  if (err <= std::max(tol, noise) || depth == 0) return value;
  double const mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, tol / 2, depth - 1) + adaptive_gk(f, mid, b, tol / 2, depth - 1);
}

double f_nested(int m, double T, double tol) {
  if (m == 0) return 1.0;
  if (T <= 0) return 0.0;
  // f_m(T) = int_0^T e^x f_{m-1}(T - x) dx.  An inner error d moves the outer
  // integral by at most d * (e^T - 1), so the inner budget is scaled down.
  double const inner_tol = tol / (2 * std::expm1(T) + 1);
  auto integrand = [m, T, inner_tol](double x) { return std::exp(x) * f_nested(m - 1, T - x, inner_tol); };
  return adaptive_gk(integrand, 0.0, T, tol / 2, 12);
}

}  // namespace

double f_quadrature(int m, double T) {
  if (m < 0) throw std::invalid_argument("f_quadrature needs m >= 0");
  return f_nested(m, T, 1e-10);
}

Real aprime_volume(Partition const& p, Real const& T, HeightKind height) {
  if (T < 0) throw std::invalid_argument("aprime_volume needs T >= 0");
  int const l = p.length();
  if (height == HeightKind::INF) {
    Real out = 1;
    for (int j = 0; j + 1 < l; ++j) {
      int const e = p[j] + p[j + 1];
      out *= (exp(e * T) - 1) / e;
    }
    return out;
  }
  return f_closed(l - 1, T) / exponent_product(p);
}

}  // namespace flagcount
