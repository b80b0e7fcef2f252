#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace plc {

// All coordinate arithmetic is exact. Coordinates are arbitrary-precision
// integers; offsets, start coordinates and sums are arbitrary-precision
// rationals.
using BigInt = mpz_class;
using Rational = mpq_class;

/// gcd(gcd(|a|,|b|),|c|); gcd(0,x) = |x|.
inline BigInt gcd3(const BigInt& a, const BigInt& b, const BigInt& c) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

/// Bit length of |v|; 0 for v = 0.
inline std::size_t bit_length(const BigInt& v) {
  if (mpz_sgn(v.get_mpz_t()) == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Order- and sign-sensitive hash over the limbs of v.
inline std::uint64_t hash_bigint(const BigInt& v, std::uint64_t seed) {
  const mpz_srcptr z = v.get_mpz_t();
  std::uint64_t h = seed ^ mix64(static_cast<std::uint64_t>(mpz_sgn(z) + 2));
  const std::size_t n = mpz_size(z);
  const mp_limb_t* limbs = mpz_limbs_read(z);
  for (std::size_t i = 0; i < n; ++i) {
    h = mix64(h ^ static_cast<std::uint64_t>(limbs[i]));
  }
  return h;
}

/// Parses "n" or "n/d" in base 10. Throws std::invalid_argument on garbage
/// or zero denominator; result is canonicalized (gcd 1, positive denominator).
Rational parse_rational(std::string_view text);

/// Canonical "n/d" rendering (denominator always present and positive).
std::string rational_string(const Rational& q);

}  // namespace plc
