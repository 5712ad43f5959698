#include "flagcount/integer.hpp"

#include <cstdlib>
#include <numeric>

namespace flagcount {

std::string to_fraction_string(Rational const& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

Rational parse_fraction(std::string_view text) {
  auto const parse_int = [](std::string_view s) -> Integer {
    if (s.empty()) throw std::invalid_argument("empty integer in fraction");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("bad integer in fraction");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw std::invalid_argument("bad integer in fraction: " + std::string(s));
      }
    }
    return Integer(std::string(s));
  };
  auto const slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer const num = parse_int(text.substr(0, slash));
  Integer const den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in fraction");
  return Rational(num, den);
}

Integer floor(Rational const& value) {
  Integer q = numerator(value) / denominator(value);
  if (numerator(value) < 0 && q * denominator(value) != numerator(value)) --q;
  return q;
}

Integer ceil(Rational const& value) {
  Integer q = numerator(value) / denominator(value);
  if (numerator(value) > 0 && q * denominator(value) != numerator(value)) ++q;
  return q;
}

Integer floor_root(Integer const& value, int k) {
  if (k < 1) throw std::invalid_argument("floor_root: k must be >= 1");
  if (value < 0) throw std::invalid_argument("floor_root: negative radicand");
  if (k == 1 || value < 2) return value;
  // Bisection on [0, 2^(bits/k + 1)].
  unsigned const bits = msb(value) + 1;
  Integer lo = 0;
  Integer hi = Integer(1) << (bits / static_cast<unsigned>(k) + 1);
  while (lo < hi) {
    Integer mid = (lo + hi + 1) >> 1;
    if (pow(mid, static_cast<unsigned>(k)) <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

Integer floor_root(Rational const& value, int k) {
  if (value < 0) throw std::invalid_argument("floor_root: negative radicand");
  // floor((p/q)^(1/k)) = max m with m^k q <= p, i.e. floor_root(floor(p/q)) is
  // not enough in general; search directly.
  Integer const& p = numerator(value);
  Integer const& q = denominator(value);
  Integer m = floor_root(Integer(p / q), k);
  while (pow(Integer(m + 1), static_cast<unsigned>(k)) * q <= p) ++m;
  while (m > 0 && pow(m, static_cast<unsigned>(k)) * q > p) --m;
  return m;
}

std::int64_t to_int64(Integer const& value) {
  if (value > INT64_MAX || value < INT64_MIN) {
    throw OverflowError("integer does not fit in int64: " + value.str());
  }
  return value.convert_to<std::int64_t>();
}

Rational hermite_constant_power(int r) {
  switch (r) {
    case 1: return Rational(1);
    case 2: return Rational(4, 3);
    case 3: return Rational(2);
    case 4: return Rational(4);
    case 5: return Rational(8);
    case 6: return Rational(64, 3);
    case 7: return Rational(64);
    case 8: return Rational(256);
    default:
      throw std::invalid_argument("hermite constant unknown for rank " +
                                  std::to_string(r));
  }
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a, b);
}

}  // namespace flagcount
