#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "fanrot/errors.hpp"

namespace fanrot {

using Int = boost::multiprecision::cpp_int;

inline int sign(const Int& v) { return v.sign(); }

inline Int abs_value(const Int& v) { return v < 0 ? Int(-v) : v; }

inline Int gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

/// Floor division; `b` must be non-zero.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Solutions of s*a + t*b = gcd(a, b) with gcd >= 0.
struct Bezout {
  Int g, s, t;
};

inline Bezout extended_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline std::string to_string(const Int& v) { return v.str(); }

/// Decimal integer with optional leading sign.
inline Int parse_int(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw ParseError("expected an integer, got '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
    }
  }
  Int v(std::string(text.substr(text[0] == '+' ? 1 : 0)));
  return v;
}

/// Number of bits in |v| (0 for v == 0).
inline std::size_t bit_length(const Int& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(abs_value(v)) + 1;
}

}  // namespace fanrot
