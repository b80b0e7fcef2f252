#pragma once

#include <stdexcept>
#include <string>

namespace plc {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// projective primitives
struct ZeroTriple : Error {
  ZeroTriple() : Error("homogeneous triple must have a nonzero component") {}
};
struct IdenticalPoints : Error {
  using Error::Error;
};
struct IdenticalLines : Error {
  using Error::Error;
};

// closure engine
struct ParallelLinesEncountered : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};

// inequality checks; raised only when a checked statement fails on data
// where it must hold, which means the engine itself is broken
struct TheoremViolation : Error {
  using Error::Error;
};

// oracles
struct DegenerateGrid : Error {
  using Error::Error;
};
struct AssertionFailure : Error {
  using Error::Error;
};

// persistence
struct ChecksumMismatch : Error {
  using Error::Error;
};
struct VersionMismatch : Error {
  using Error::Error;
};
struct SnapshotParseError : Error {
  using Error::Error;
};

// rendering
struct EmptyViewport : Error {
  EmptyViewport() : Error("viewport must have positive width and height") {}
};

}  // namespace plc
