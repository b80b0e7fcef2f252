#include "plc/run.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "plc/errors.hpp"

namespace plc {

StartConfig parse_start_points(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<RatPoint> pts;
  std::string tok;
  while (is >> tok) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("start point must be x,y: " + tok);
    }
    pts.push_back({parse_rational(tok.substr(0, comma)),
                   parse_rational(tok.substr(comma + 1))});
  }
  if (pts.size() != 4) {
    throw std::invalid_argument("start needs exactly 4 points");
  }
  return StartConfig{{pts[0], pts[1], pts[2], pts[3]}};
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "start") {
      cfg.start = parse_start_points(value);
    } else if (key == "max_stage") {
      cfg.max_stage = std::stoi(value);
    } else if (key == "max_points") {
      cfg.budget.max_points = std::stoull(value);
    } else if (key == "max_lines") {
      cfg.budget.max_lines = std::stoull(value);
    } else if (key == "max_coord_bits") {
      cfg.budget.max_coord_bits = std::stoull(value);
    } else if (key == "policy") {
      const auto p = parse_policy(value);
      if (!p) throw std::invalid_argument("unknown policy " + value);
      cfg.policy = *p;
    } else if (key == "workers") {
      cfg.workers = std::stoi(value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else {
      throw std::invalid_argument("unknown config key " + key);
    }
  }
  if (cfg.max_stage < 1 || cfg.workers < 1 || cfg.budget.max_points == 0 ||
      cfg.budget.max_lines == 0 || cfg.budget.max_coord_bits == 0) {
    throw std::invalid_argument("config values must be positive");
  }
  return cfg;
}

std::string stats_csv(const std::vector<StageStats>& rows) {
  std::ostringstream os;
  os << "k,n_k,m_k,delta_k,Delta_k,deltabar_k,Deltabar_k,"
        "parallel_pairs_skipped,max_coord_bits,thm4_bound,intersect_ms,"
        "connect_ms\n";
  char ms[64];
  for (const auto& r : rows) {
    os << r.stage << ',' << r.point_count << ',' << r.line_count << ','
       << r.min_point_degree << ',' << r.max_point_degree << ','
       << r.min_line_degree << ',' << r.max_line_degree << ','
       << r.parallel_pairs << ',' << r.max_coord_bits << ','
       << degree_recurrence_bound(r) << ',';
    std::snprintf(ms, sizeof ms, "%.3f,%.3f", r.intersect_ms, r.connect_ms);
    os << ms << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing " + path.string());
}

void log_diagnostics(std::ostream& log, int stage, const StageDiagnostics& d) {
  log << "note: stage " << stage << " intersect: " << d.intersect.candidate_pairs
      << " candidate pairs, " << d.intersect.existing_hits
      << " met existing points, " << d.intersect.infinity_pairs
      << " met at infinity, " << d.intersect.fresh << " fresh points; connect: "
      << d.connect.candidate_pairs << " candidate pairs, "
      << d.connect.existing_hits << " already joined, " << d.connect.fresh
      << " fresh lines\n";
}

// Shared tail of run_iterate and resume_run: iterate stages, persist
// artifacts, assemble analytics.
RunResult drive(Configuration cfg, const RunConfig& rc, ParallelPolicy policy,
                bool write_initial_snapshot, std::ostream& log) {
  RunResult result;
  std::error_code ec;
  std::filesystem::create_directories(rc.out_dir, ec);
  if (ec) {
    result.exit_code = exit_integrity_failure;
    result.message = "cannot create " + rc.out_dir.string() + ": " + ec.message();
    return result;
  }

  auto snapshot_path = [&](int stage) {
    return rc.out_dir / ("stage_" + std::to_string(stage) + ".snap");
  };
  auto persist = [&](const Configuration& c) {
    const auto path = snapshot_path(c.stage);
    save_snapshot(make_snapshot(c, rc.start, policy), path);
    result.snapshots.push_back(path);
  };

  AnalyticsBundle& bundle = result.analytics;
  const StageStats base_stats = degrees(cfg);
  bundle.stats.push_back(base_stats);
  bundle.checks.push_back(check_first_stage(base_stats));
  {
    auto samples = extract_pencil_samples(cfg);
    for (auto& s : samples) {
      bundle.pencil_stages.push_back(cfg.stage);
      bundle.pencil_samples.push_back(std::move(s));
    }
  }
  if (write_initial_snapshot) persist(cfg);

  while (cfg.stage < rc.max_stage && result.exit_code == exit_ok) {
    StageDiagnostics diag;
    try {
      auto [next, stats] = run_stage(cfg, policy, rc.budget, rc.workers,
                                     rc.report_anomalies ? &diag : nullptr);
      if (rc.report_anomalies) log_diagnostics(log, next.stage, diag);
      persist(next);
      bundle.stats.push_back(stats);

      StageCheck check = check_stage_bounds(bundle.stats[bundle.stats.size() - 2],
                                            stats);
      bundle.checks.push_back(check);
      if (!check.all_ok()) {
        if (check.assumption_parallel_free) {
          result.exit_code = exit_theorem_violation;
          result.message = "stage " + std::to_string(check.stage) +
                           " violates: " + check.first_failure();
          log << "error: " << result.message << "\n";
        } else {
          log << "warning: stage " << check.stage << " fails '"
              << check.first_failure()
              << "' on a run that met parallel line pairs; the inequality is"
                 " only guaranteed for parallel-free runs\n";
        }
      }

      bundle.degree_gain.push_back(measure_degree_gain(cfg, next));
      auto samples = extract_pencil_samples(next);
      for (auto& s : samples) {
        bundle.pencil_stages.push_back(next.stage);
        bundle.pencil_samples.push_back(std::move(s));
      }
      cfg = std::move(next);
    } catch (const BudgetExceeded& e) {
      result.exit_code = exit_budget_exceeded;
      result.message = e.what();
      log << "stopped: " << e.what() << " (stage " << cfg.stage
          << " snapshot remains resumable)\n";
    } catch (const ParallelLinesEncountered& e) {
      result.exit_code = exit_invalid_input;
      result.message = e.what();
      log << "stopped: " << e.what() << "\n";
    }
  }

  result.stats = bundle.stats;
  try {
    bundle.envelope = envelope_report(bundle.stats);
  } catch (const TheoremViolation& e) {
    if (result.exit_code == exit_ok) {
      result.exit_code = exit_theorem_violation;
      result.message = e.what();
    }
    log << "error: " << e.what() << "\n";
    bundle.envelope = EnvelopeReport{};
  }
  write_file(rc.out_dir / "stats.csv", stats_csv(bundle.stats));
  write_file(rc.out_dir / "bounds.json", analytics_json(bundle));
  return result;
}

}  // namespace

RunResult run_iterate(const RunConfig& rc, std::ostream& log) {
  Configuration cfg;
  try {
    cfg = init(rc.start, rc.policy);
  } catch (const InvalidStart& e) {
    RunResult r;
    r.exit_code = exit_invalid_input;
    r.message = e.what();
    log << "error: " << e.what() << "\n";
    return r;
  }
  return drive(std::move(cfg), rc, rc.policy, /*write_initial_snapshot=*/true, log);
}

RunResult resume_run(const std::filesystem::path& snapshot_path,
                     const RunConfig& overrides,
                     std::optional<ParallelPolicy> policy_override,
                     std::ostream& log) {
  RunResult failure;
  Snapshot snap;
  try {
    snap = load_snapshot(snapshot_path);
  } catch (const VersionMismatch& e) {
    failure.exit_code = exit_integrity_failure;
    failure.message = e.what();
    log << "error: " << e.what() << "\n";
    return failure;
  } catch (const ChecksumMismatch& e) {
    failure.exit_code = exit_integrity_failure;
    failure.message = e.what();
    log << "error: " << e.what() << "\n";
    return failure;
  } catch (const Error& e) {
    failure.exit_code = exit_integrity_failure;
    failure.message = e.what();
    log << "error: " << e.what() << "\n";
    return failure;
  }

  RunConfig rc = overrides;
  rc.start = snap.start;
  const ParallelPolicy policy = policy_override.value_or(snap.policy);
  rc.policy = policy;

  Configuration cfg;
  try {
    cfg = to_configuration(snap);
  } catch (const Error& e) {
    failure.exit_code = exit_integrity_failure;
    failure.message = e.what();
    log << "error: " << e.what() << "\n";
    return failure;
  }
  // The snapshot does not persist the incremental frontier; the first
  // resumed stage re-enumerates all pairs, which deduplication makes
  // equivalent to the incremental continuation.
  return drive(std::move(cfg), rc, policy, /*write_initial_snapshot=*/false, log);
}

int verify_snapshot_file(const std::filesystem::path& path, std::ostream& log) {
  Snapshot snap;
  try {
    snap = load_snapshot(path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_integrity_failure;
  }
  Configuration cfg;
  try {
    cfg = to_configuration(snap);
    check_consistency(cfg);
  } catch (const Error& e) {
    log << "error: integrity: " << e.what() << "\n";
    return exit_integrity_failure;
  }
  const StageStats stats = degrees(cfg);
  log << "snapshot ok: stage " << stats.stage << ", " << stats.point_count
      << " points, " << stats.line_count << " lines, point degrees ["
      << stats.min_point_degree << ", " << stats.max_point_degree
      << "], line degrees [" << stats.min_line_degree << ", "
      << stats.max_line_degree << "], " << stats.parallel_pairs
      << " parallel pairs, " << stats.max_coord_bits << " coordinate bits\n";

  const StageCheck check = check_first_stage(stats);
  if (!check.all_ok()) {
    if (check.assumption_parallel_free) {
      log << "error: " << check.first_failure() << "\n";
      return exit_theorem_violation;
    }
    log << "warning: '" << check.first_failure()
        << "' fails, but the configuration contains parallel line pairs\n";
  }
  return exit_ok;
}

}  // namespace plc
