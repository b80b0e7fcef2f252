#pragma once

#include <string>
#include <vector>

#include "plc/bigint.hpp"
#include "plc/triple.hpp"

namespace plc {

/// A family of parallel lines: a direction class (canonical triple with zero
/// constant term) and one exact rational offset per line. The line for
/// offset o is a*x + b*y + o = 0, cleared to integers.
struct LineFamily {
  Line direction;  // (a : b : 0), canonical
  std::vector<Rational> offsets;  // strictly increasing, pairwise distinct
};

/// Builds a family from raw direction coefficients; offsets are sorted and
/// checked for duplicates.
LineFamily make_family(const BigInt& a, const BigInt& b,
                       std::vector<Rational> offsets);

/// The i-th line of the family in canonical coordinates.
Line family_line(const LineFamily& f, std::size_t i);

/// N >= 2 families, no two sharing a direction. Two families of equal size n
/// form an "n x n grid" whose n^2 pairwise intersections are the grid points.
struct GridSpec {
  std::vector<LineFamily> families;
  std::string label;
};

/// Two finite sets of exact rationals.
struct SumsetInstance {
  std::vector<Rational> a;
  std::vector<Rational> b;
};

}  // namespace plc
