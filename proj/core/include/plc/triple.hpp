#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "plc/bigint.hpp"
#include "plc/errors.hpp"

namespace plc {

struct PointRole;
struct LineRole;

/// A projective point or line in canonical homogeneous coordinates:
/// not all components zero, gcd(|a|,|b|,|c|) = 1, and the first nonzero
/// component (in a, b, c order) is positive. Canonical triples compare and
/// hash componentwise, which makes projective equality plain equality.
///
/// A point (a : b : c) with c != 0 is the affine point (a/c, b/c); c = 0 is a
/// point at infinity. A line (a : b : c) is the locus a*x + b*y + c*z = 0.
template <class Role>
struct Homogeneous {
  BigInt a, b, c;

  Homogeneous() : a(0), b(0), c(1) {}
  Homogeneous(BigInt a_, BigInt b_, BigInt c_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}

  bool at_infinity() const { return sgn(c) == 0; }

  friend bool operator==(const Homogeneous& x, const Homogeneous& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
  // lexicographic on (a, b, c)
  friend bool operator<(const Homogeneous& x, const Homogeneous& y) {
    if (int s = cmp(x.a, y.a); s != 0) return s < 0;
    if (int s = cmp(x.b, y.b); s != 0) return s < 0;
    return cmp(x.c, y.c) < 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Homogeneous& t) {
    return os << "(" << t.a << " : " << t.b << " : " << t.c << ")";
  }
};

using Point = Homogeneous<PointRole>;
using Line = Homogeneous<LineRole>;

template <class Role>
struct TripleHash {
  std::size_t operator()(const Homogeneous<Role>& t) const {
    std::uint64_t h = hash_bigint(t.a, 0x706c6370746c6873ull);
    h = hash_bigint(t.b, h);
    h = hash_bigint(t.c, h);
    return static_cast<std::size_t>(h);
  }
};

/// The unique canonical triple projectively equal to (a, b, c).
/// Throws ZeroTriple when all components vanish. Idempotent.
template <class Role>
Homogeneous<Role> normalized(BigInt a, BigInt b, BigInt c) {
  BigInt g = gcd3(a, b, c);
  if (sgn(g) == 0) throw ZeroTriple{};
  if (g != 1) {
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  const int lead = sgn(a) != 0 ? sgn(a) : (sgn(b) != 0 ? sgn(b) : sgn(c));
  if (lead < 0) {
    mpz_neg(a.get_mpz_t(), a.get_mpz_t());
    mpz_neg(b.get_mpz_t(), b.get_mpz_t());
    mpz_neg(c.get_mpz_t(), c.get_mpz_t());
  }
  return Homogeneous<Role>{std::move(a), std::move(b), std::move(c)};
}

inline Point normalized_point(const BigInt& a, const BigInt& b, const BigInt& c) {
  return normalized<PointRole>(a, b, c);
}
inline Line normalized_line(const BigInt& a, const BigInt& b, const BigInt& c) {
  return normalized<LineRole>(a, b, c);
}

namespace detail {
// cross(u, v); the result is canonicalized by the callers
template <class R1, class R2>
void cross(const Homogeneous<R1>& u, const Homogeneous<R2>& v, BigInt& x,
           BigInt& y, BigInt& z) {
  x = u.b * v.c - u.c * v.b;
  y = u.c * v.a - u.a * v.c;
  z = u.a * v.b - u.b * v.a;
}
}  // namespace detail

/// Join: the unique line through two distinct points.
inline Line line_through(const Point& p, const Point& q) {
  if (p == q) throw IdenticalPoints{"line_through: points coincide"};
  BigInt x, y, z;
  detail::cross(p, q, x, y, z);
  return normalized<LineRole>(std::move(x), std::move(y), std::move(z));
}

/// Meet: the unique common point of two distinct lines. The result has
/// c = 0 exactly when the lines are parallel (they meet at infinity).
inline Point meet(const Line& l1, const Line& l2) {
  if (l1 == l2) throw IdenticalLines{"meet: lines coincide"};
  BigInt x, y, z;
  detail::cross(l1, l2, x, y, z);
  return normalized<PointRole>(std::move(x), std::move(y), std::move(z));
}

/// Exact incidence: a*x + b*y + c*z = 0.
inline bool incident(const Point& p, const Line& l) {
  BigInt s = p.a * l.a + p.b * l.b + p.c * l.c;
  return sgn(s) == 0;
}

/// Duality keeps coordinates and swaps the role. An involution, and a
/// join/meet homomorphism: dual(line_through(p,q)) = meet(dual(p), dual(q)).
inline Line dual(const Point& p) { return Line{p.a, p.b, p.c}; }
inline Point dual(const Line& l) { return Point{l.a, l.b, l.c}; }

/// True when the (a, b) parts are proportional, i.e. the lines meet at
/// infinity. The line at infinity (0 : 0 : 1) is parallel to everything
/// under this test.
inline bool parallel(const Line& l1, const Line& l2) {
  BigInt d = l1.a * l2.b - l1.b * l2.a;
  return sgn(d) == 0;
}

/// Affine direction class of a line: the canonical triple (a : b : 0).
/// Lines share a direction exactly when they are parallel. Requires a
/// line that is not the line at infinity.
inline Line direction_of(const Line& l) {
  return normalized<LineRole>(l.a, l.b, BigInt(0));
}

}  // namespace plc
