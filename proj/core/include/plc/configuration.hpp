#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "plc/triple.hpp"

namespace plc {

/// What to do with a pair of parallel lines during the intersection step.
/// skip       discard the meet at infinity and count the pair
/// error      abort the step on the first parallel pair
/// projective keep points at infinity (c = 0) as ordinary points
enum class ParallelPolicy { error, skip, projective };

std::string_view to_string(ParallelPolicy p);
std::optional<ParallelPolicy> parse_policy(std::string_view text);

/// Exact per-stage record. Degrees are taken at the beginning of the stage:
/// the degree of a point is the number of lines through it, the degree of a
/// line the number of points on it.
struct StageStats {
  int stage = 1;
  std::uint64_t point_count = 0;
  std::uint64_t line_count = 0;
  std::uint64_t min_point_degree = 0;
  std::uint64_t max_point_degree = 0;
  std::uint64_t min_line_degree = 0;
  std::uint64_t max_line_degree = 0;
  // unordered pairs of current lines whose meet lies at infinity; under the
  // skip policy these are exactly the intersections absent from the point set
  std::uint64_t parallel_pairs = 0;
  std::uint64_t max_coord_bits = 0;
  double intersect_ms = 0.0;
  double connect_ms = 0.0;
};

/// min(n - 1, 2*delta - 3): the degree floor the next stage must reach.
std::uint64_t degree_recurrence_bound(const StageStats& s);

/// A point-line configuration closed for bookkeeping: the two element
/// vectors, the full incidence structure, and hash indexes for exact
/// deduplication.
///
/// Invariants: every stored triple is canonical and unique; incidence lists
/// are sorted, mutually consistent and complete (every incident pair is
/// registered); points and lines are appended stage by stage, each batch
/// sorted lexicographically, so indices are stable for the lifetime of a run.
struct Configuration {
  int stage = 1;
  std::vector<Point> points;
  std::vector<Line> lines;
  std::vector<std::vector<std::uint32_t>> lines_of_point;
  std::vector<std::vector<std::uint32_t>> points_of_line;
  std::unordered_map<Point, std::uint32_t, TripleHash<PointRole>> point_index;
  std::unordered_map<Line, std::uint32_t, TripleHash<LineRole>> line_index;

  // Incremental frontier, an optimization hint only: line pairs below
  // prior_line_count were already intersected, point pairs below
  // fresh_point_begin already joined. Zero means no history is assumed and
  // every pair is (re)enumerated; results are identical either way because
  // all insertions deduplicate.
  std::size_t prior_line_count = 0;
  std::size_t fresh_point_begin = 0;

  bool has_point(const Point& p) const { return point_index.count(p) != 0; }
  bool has_line(const Line& l) const { return line_index.count(l) != 0; }
};

}  // namespace plc
