#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "plc/bounds.hpp"
#include "plc/engine.hpp"
#include "plc/snapshot.hpp"

namespace plc {

// process exit codes, shared by the library driver and the CLI
inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_input = 2;
inline constexpr int exit_budget_exceeded = 3;
inline constexpr int exit_theorem_violation = 4;
inline constexpr int exit_integrity_failure = 5;

struct RunConfig {
  StartConfig start = canonical_start();
  int max_stage = 4;
  Budget budget;
  ParallelPolicy policy = ParallelPolicy::skip;
  int workers = 1;
  std::filesystem::path out_dir = "plc-out";
  bool report_anomalies = false;
};

struct RunResult {
  int exit_code = exit_ok;
  std::string message;
  std::vector<StageStats> stats;
  AnalyticsBundle analytics;
  std::vector<std::filesystem::path> snapshots;
};

/// Parses "x,y x,y x,y x,y" with rational coordinates.
StartConfig parse_start_points(std::string_view text);

/// Key=value run configuration file; keys: start, max_stage, max_points,
/// max_lines, max_coord_bits, policy, workers, out_dir. '#' starts a comment.
RunConfig load_run_config(const std::filesystem::path& path);

/// Runs stages from the start configuration up to max_stage or the first
/// budget stop, writing stage_<k>.snap per stage plus stats.csv and
/// bounds.json into out_dir. Inequality failures on parallel-free runs exit
/// with exit_theorem_violation; on runs that met parallel pairs they are
/// reported in bounds.json and logged as warnings only.
RunResult run_iterate(const RunConfig& cfg, std::ostream& log);

/// Continues a run from a snapshot. The start echo and (unless overridden)
/// the policy are taken from the snapshot; snapshots written for the
/// continued stages are bit-identical to those of an uninterrupted run.
RunResult resume_run(const std::filesystem::path& snapshot_path,
                     const RunConfig& overrides,
                     std::optional<ParallelPolicy> policy_override,
                     std::ostream& log);

/// Integrity and invariant re-check of one snapshot file.
int verify_snapshot_file(const std::filesystem::path& path, std::ostream& log);

/// Fixed-column stats table:
/// k,n_k,m_k,delta_k,Delta_k,deltabar_k,Deltabar_k,parallel_pairs_skipped,
/// max_coord_bits,thm4_bound,intersect_ms,connect_ms
std::string stats_csv(const std::vector<StageStats>& rows);

}  // namespace plc
