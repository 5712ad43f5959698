#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "boost/multiprecision/cpp_int.hpp"

namespace flagcount {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown by the fixed-width fast paths when a value leaves the int64 range.
// Desk-scale jobs never get close; hitting this means the job is out of scope.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Always "p/q", including q = 1, so cached heights parse uniformly.
std::string to_fraction_string(Rational const& value);

// Accepts "p/q" or a bare integer "p".  Throws std::invalid_argument.
Rational parse_fraction(std::string_view text);

// floor(value^(1/k)) for value >= 0, k >= 1.
Integer floor_root(Rational const& value, int k);

// floor(value^(1/k)) for an integer.
Integer floor_root(Integer const& value, int k);

Integer floor(Rational const& value);
Integer ceil(Rational const& value);

std::int64_t to_int64(Integer const& value);

// Hermite's constant raised to its own dimension, gamma_r^r, which is
// rational for r <= 8.
Rational hermite_constant_power(int r);

namespace checked {

inline std::int64_t narrow(__int128 value) {
  if (value > INT64_MAX || value < INT64_MIN) {
    throw OverflowError("int64 overflow in lattice fast path");
  }
  return static_cast<std::int64_t>(value);
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("int64 overflow in lattice fast path");
  }
  return out;
}

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("int64 overflow in lattice fast path");
  }
  return out;
}

}  // namespace checked

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace flagcount
