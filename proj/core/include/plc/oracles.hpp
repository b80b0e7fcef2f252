#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plc/grid.hpp"

namespace plc {

/// Minimum number of parallel lines needed to pass through all n^2
/// intersections of a two-family n x n grid, minimized over every direction
/// determined by a pair of distinct grid intersections except the two grid
/// directions themselves (either grid family would trivially cover with n
/// lines). Returns n^2 when no admissible direction collapses any pair.
///
/// Exhaustive and exact: for each candidate direction the cover size is the
/// number of distinct projections of the grid points along that direction.
std::uint64_t grid_cover_min(const GridSpec& g);

/// |{a + b : a in A, b in B}| by exhaustive enumeration in exact rational
/// arithmetic.
std::uint64_t sumset_size(const SumsetInstance& inst);

/// Number of distinct points lying on a line of the designated family and on
/// a line of some other family. All families must have the same size. With
/// `limit_to_line_count` the non-designated families are truncated to the
/// first (lines_per_family - 1) of them; the default considers all of them.
std::uint64_t family_intersection_count(const GridSpec& g,
                                        std::size_t designated = 0,
                                        bool limit_to_line_count = false);

/// One data point for the incidence lower-bound check.
struct IncidenceSample {
  std::string label;
  std::uint64_t families = 0;          // N
  std::uint64_t lines_per_family = 0;  // k
  std::uint64_t point_count = 0;       // |P|
  double ratio() const;                // |P| / (k^2 sqrt(N))
};

struct IncidenceReport {
  std::vector<IncidenceSample> samples;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  Rational threshold;
};

/// Asserts point_count^2 * den(c)^2 >= num(c)^2 * k^4 * N for every sample
/// (the exact form of ratio >= c) and reports the observed ratios. Throws
/// AssertionFailure naming the first violating sample.
IncidenceReport incidence_bound_report(std::vector<IncidenceSample> samples,
                                       const Rational& threshold);

/// Convenience overload: computes |P| for each grid via
/// family_intersection_count.
IncidenceReport incidence_bound_report(const std::vector<GridSpec>& grids,
                                       const Rational& threshold);

// deterministic instance generators (seeded by the caller)

/// Axis-parallel grid with offsets 0..n-1 in both families.
GridSpec arithmetic_grid(std::uint64_t n);

/// Two random non-parallel directions with n distinct random rational
/// offsets each.
GridSpec random_grid(std::uint64_t n, std::mt19937_64& rng);

/// N random pairwise non-parallel families of k lines each.
GridSpec random_families(std::uint64_t n_families, std::uint64_t lines_each,
                         std::mt19937_64& rng);

/// Uniform integer in [lo, hi] drawn portably from rng.
std::int64_t rand_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

}  // namespace plc
