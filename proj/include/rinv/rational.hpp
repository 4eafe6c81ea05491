#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rinv {

// Exact arithmetic everywhere; no floating point in any algebraic path.
using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Renders as "n" or "n/d", denominator always positive.
inline std::string to_string(const Rational& q) { return q.get_str(); }

// Parses "n" or "n/d"; returns false on malformed input or zero denominator.
inline bool parse_rational(const std::string& text, Rational& out) {
  if (text.empty()) return false;
  if (out.set_str(text, 10) != 0) return false;
  if (out.get_den() == 0) return false;
  out.canonicalize();
  return true;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rinv
