#pragma once

#include <array>
#include <string>
#include <vector>

#include "plc/bigint.hpp"
#include "plc/errors.hpp"
#include "plc/triple.hpp"

namespace plc {

/// Exact rational point of the affine plane.
struct RatPoint {
  Rational x, y;
};

/// The point (x : y : 1) cleared to canonical integer coordinates.
Point affine_point(const Rational& x, const Rational& y);

/// The four seed points of a run.
struct StartConfig {
  std::array<RatPoint, 4> points;
};

/// (0,0), (1,0), (0,1), (5,7): the validated parallel-free fixture used as
/// the default everywhere.
StartConfig canonical_start();

/// One reason a start is not usable: either three of the four points are
/// collinear, or two of the six connecting lines are parallel.
struct Violation {
  enum class Kind { collinear_triple, parallel_joins };
  Kind kind;
  // collinear_triple: indices[0..2] are the collinear points.
  // parallel_joins: join(indices[0],indices[1]) is parallel to
  // join(indices[2],indices[3]).
  std::array<int, 4> indices{-1, -1, -1, -1};
  std::string describe() const;
};

/// Empty result means the start is admissible: four distinct points, no
/// three collinear, and none of the six connecting lines parallel.
/// Violations are data, not errors.
std::vector<Violation> validate_start(const StartConfig& cfg);

struct InvalidStart : Error {
  explicit InvalidStart(std::vector<Violation> v);
  std::vector<Violation> violations;
};

}  // namespace plc
