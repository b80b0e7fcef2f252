#pragma once

#include <cstdint>
#include <utility>

#include "plc/configuration.hpp"
#include "plc/start.hpp"

namespace plc {

/// Hard caps that keep the doubly exponential growth from running away.
/// Exceeding any of them aborts the offending step with BudgetExceeded and
/// leaves the input configuration untouched, so the last committed stage
/// stays resumable.
struct Budget {
  std::uint64_t max_points = 200000;
  std::uint64_t max_lines = 200000;
  std::uint64_t max_coord_bits = 16384;
};

/// Per-step counters, reported when anomaly diagnostics are requested.
struct StepDiagnostics {
  std::uint64_t candidate_pairs = 0;
  std::uint64_t existing_hits = 0;   // candidates that landed on existing elements
  std::uint64_t infinity_pairs = 0;  // line pairs met at infinity during the step
  std::uint64_t fresh = 0;           // elements added by the step
};

/// Builds the four-point, six-line stage-1 configuration.
/// Collinear triples always reject the start; parallel connecting lines
/// reject it only under the error policy, since the other policies define
/// how meets at infinity are handled later anyway.
Configuration init(const StartConfig& cfg,
                   ParallelPolicy policy = ParallelPolicy::error);

/// Adds the meet of every pair of distinct lines not already present, with
/// parallel pairs treated per policy, and registers the new points on all
/// their lines. Data-parallel over `workers` threads; the result is
/// bit-identical for any worker count.
Configuration intersection_step(const Configuration& c, ParallelPolicy policy,
                                const Budget& budget = {}, int workers = 1,
                                StepDiagnostics* diag = nullptr);

/// Adds the connecting line of every point pair not already joined and
/// registers every configuration point incident to each new line (not just
/// the generating pair). Data-parallel; deterministic like the above.
Configuration connection_step(const Configuration& c, const Budget& budget = {},
                              int workers = 1, StepDiagnostics* diag = nullptr);

struct StageDiagnostics {
  StepDiagnostics intersect;
  StepDiagnostics connect;
};

/// One full stage: intersection step then connection step. Returns the next
/// configuration and its statistics (degrees, parallel pairs, coordinate
/// size, step wall times).
std::pair<Configuration, StageStats> run_stage(const Configuration& c,
                                               ParallelPolicy policy,
                                               const Budget& budget = {},
                                               int workers = 1,
                                               StageDiagnostics* diag = nullptr);

/// Reference implementation used as the correctness oracle for run_stage:
/// all-pairs meet, all-pairs join over the grown point set, and a full
/// incidence rebuild by exhaustive scan. Single-threaded, no shortcuts.
Configuration naive_stage(const Configuration& c, ParallelPolicy policy,
                          const Budget& budget = {});

/// Exact degree extrema and size counters for the configuration as it is.
StageStats degrees(const Configuration& c);

/// Number of unordered pairs of lines meeting at infinity, computed by
/// grouping lines by direction class.
std::uint64_t parallel_pair_count(const std::vector<Line>& lines);

/// Role-swapped copy: points become lines and lines become points, with the
/// incidence structure transposed. Frontier hints reset.
Configuration dual(const Configuration& c);

/// Verifies every structural invariant (canonical triples, index maps,
/// sorted mutual incidence, incidence completeness, spanning degrees).
/// Throws TheoremViolation with a description on the first breach.
void check_consistency(const Configuration& c);

/// Set equality of canonical points and canonical lines (order ignored).
bool same_sets(const Configuration& x, const Configuration& y);

}  // namespace plc
