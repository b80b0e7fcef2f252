#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plc/configuration.hpp"
#include "plc/oracles.hpp"

namespace plc {

/// Outcome of the constant-free inequality checks between two consecutive
/// stages. Every flag is decided by exact integer arithmetic.
struct StageCheck {
  int stage = 1;              // the later stage
  bool has_previous = false;  // growth/recurrence checks need a predecessor
  bool strict_growth_ok = true;      // n_{k+1} >= n_k + 1
  bool min_degree_ok = true;         // delta >= 3
  bool degree_recurrence_ok = true;  // delta_{k+1} >= min(n_k - 1, 2 delta_k - 3)
  bool point_pair_bound_ok = true;   // n_{k+1} <= C(m_k, 2)
  bool line_pair_bound_ok = true;    // m_{k+1} <= C(n_{k+1}, 2)
  bool point_quartic_ok = true;      // 8 n_{k+1} < n_k^4
  bool line_quartic_ok = true;       // 8 m_{k+1} < m_k^4
  bool envelope_ok = true;           // n_k <= 4^(4^k)
  // the inequalities are guaranteed only for runs that never met a parallel
  // line pair; when this is false a failed flag is reported, not fatal
  bool assumption_parallel_free = true;

  bool all_ok() const;
  std::string first_failure() const;  // empty when all_ok()
};

/// Checks valid for a stage without a predecessor (min degree, envelope).
StageCheck check_first_stage(const StageStats& cur);

/// Full check row for consecutive stages of one run.
StageCheck check_stage_bounds(const StageStats& prev, const StageStats& cur);

/// Throws TheoremViolation naming the first failed inequality and stage.
void enforce(const StageCheck& check);

/// n_k <= 4^(4^k), exact. Counts are 64-bit, i.e. below 4^32, so the bound
/// can only bind for k <= 2.
bool count_envelope_holds(const StageStats& s);

/// Measured ratios for the degree-gain and point-growth lower bounds whose
/// constants are existential: reported, never thresholded.
struct DegreeGainRecord {
  int from_stage = 1;
  // min over points p of stage k of d_{k+1}(p) / (delta_k * sqrt(n_k / d_k(p)))
  double degree_gain_min_ratio = 0.0;
  // n_{k+1} / (delta_k^{3/2} * sqrt(n_k))
  double point_growth_ratio = 0.0;
};

/// Requires `cur` to be the direct successor of `prev` in one run so that
/// point indices agree on the shared prefix. Both ratios are strictly
/// positive on any consistent pair; a nonpositive value throws
/// AssertionFailure.
DegreeGainRecord measure_degree_gain(const Configuration& prev,
                                     const Configuration& cur);

/// Incidence samples harvested from a configuration: for an eligible point p
/// take a maximal line l through it carrying s >= 4 further points; the
/// pencils of those s points (minus l), each truncated to delta-1 lines,
/// form s families; the sample counts the distinct meets of the first
/// pencil with the others.
std::vector<IncidenceSample> extract_pencil_samples(const Configuration& c,
                                                    std::size_t max_samples = 8);

/// Exact iteration of e -> (1 + 2e)/12 starting from `start`; the returned
/// trace has `iterations` + 1 entries. The map contracts toward 1/10 with
/// factor exactly 1/6.
std::vector<Rational> fixed_point_trace(const Rational& start, int iterations);

/// Decimal expansion of sqrt(11/10), the lower edge of the growth-exponent
/// reference band, to the requested number of significant digits.
std::string growth_band_low(int digits = 20);

struct GrowthRow {
  int stage = 1;
  std::uint64_t points = 0;
  double log4_points = 0.0;
  double log4_log4_points = 0.0;
};

/// Per-stage growth view: log4 n_k, log4 log4 n_k, and the successive
/// exponents log n_{k+1} / log n_k reported against [sqrt(1.1), 4].
struct EnvelopeReport {
  std::vector<GrowthRow> rows;
  struct Exponent {
    int from_stage;
    double log_count_ratio;
  };
  std::vector<Exponent> exponents;
  std::string band_low;
  double band_high = 4.0;
};

/// Builds the growth view and enforces the exact upper envelope on every
/// stage (TheoremViolation on failure).
EnvelopeReport envelope_report(const std::vector<StageStats>& stats,
                               int band_digits = 20);

/// Everything the run driver persists as the analytics report.
struct AnalyticsBundle {
  std::vector<StageStats> stats;
  std::vector<StageCheck> checks;
  std::vector<DegreeGainRecord> degree_gain;
  std::vector<IncidenceSample> pencil_samples;
  std::vector<int> pencil_stages;  // stage per sample, parallel to the above
  EnvelopeReport envelope;
};

/// Deterministic JSON rendering of the bundle.
std::string analytics_json(const AnalyticsBundle& bundle);

}  // namespace plc
