// Acceptance suite: runs every shipping criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "plc/bounds.hpp"
#include "plc/engine.hpp"
#include "plc/oracles.hpp"
#include "plc/run.hpp"
#include "plc/snapshot.hpp"
#include "test_util.hpp"

using namespace plc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<void()> body;
  double time_limit_s = 0.0;  // 0 = untimed
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string g_detail;  // per-criterion notes, printed under the status line

void note(const std::string& line) {
  g_detail += "        (" + line + ")\n";
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("plc_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// stats.csv with the two wall-time columns blanked, for determinism
// comparisons
std::string mask_timings(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    int commas = 0;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == ',' && ++commas == 10) {
        cut = i;
        break;
      }
    }
    out << line.substr(0, cut) << "\n";
  }
  return out.str();
}

RunResult quiet_run(const RunConfig& rc) {
  std::ostringstream log;
  return run_iterate(rc, log);
}

// ---- criteria -------------------------------------------------------------

void criterion_stage_counts() {
  Configuration c1 = init(canonical_start());
  const StageStats s1 = degrees(c1);
  require(s1.point_count == 4 && s1.line_count == 6,
          "stage 1 must have 4 points and 6 lines");
  auto [c2, s2] = run_stage(c1, ParallelPolicy::skip);
  require(s2.point_count == 7, "stage 2 must have 7 points");
  require(s2.line_count == 9, "stage 2 must have 9 lines");
  require(s2.min_point_degree == 3, "stage 2 minimum point degree must be 3");
  require(s2.max_line_degree == 3, "stage 2 maximum line degree must be 3");

  const Configuration oracle = naive_stage(c1, ParallelPolicy::skip);
  require(same_sets(c2, oracle), "stage 2 must match the naive oracle");
}

void criterion_oracle_equivalence() {
  std::mt19937_64 rng(20250809);
  for (int trial = 0; trial < 20; ++trial) {
    const StartConfig sc = plc_test::random_start(rng);
    Configuration fast = init(sc, ParallelPolicy::skip);
    Configuration slow = fast;
    for (int stage = 1; stage <= 2; ++stage) {
      fast = run_stage(fast, ParallelPolicy::skip, {}, 2).first;
      slow = naive_stage(slow, ParallelPolicy::skip);
      require(same_sets(fast, slow),
              "incremental and naive stages diverged on start " +
                  std::to_string(trial) + " at stage " + std::to_string(stage + 1));
    }
  }
}

void criterion_theorem_suite() {
  Configuration cfg = init(canonical_start());
  std::vector<StageStats> stats{degrees(cfg)};
  for (int stage = 1; stage < 4; ++stage) {
    auto [next, s] = run_stage(cfg, ParallelPolicy::skip, {}, 2);
    cfg = std::move(next);
    stats.push_back(s);
  }
  require(check_first_stage(stats[0]).all_ok(), "stage 1 checks failed");
  for (std::size_t i = 1; i < stats.size(); ++i) {
    enforce(check_stage_bounds(stats[i - 1], stats[i]));
  }
  envelope_report(stats);

  // stage 5 is attempted under the default budget; completing and stopping
  // on budget are both acceptable, failures of the inequalities are not
  try {
    auto [c5, s5] = run_stage(cfg, ParallelPolicy::skip, {}, 2);
    enforce(check_stage_bounds(stats.back(), s5));
    note("stage 5 completed: " + std::to_string(s5.point_count) + " points, " +
         std::to_string(s5.line_count) + " lines");
  } catch (const BudgetExceeded& e) {
    note(std::string("stage 5 attempt stopped by budget: ") + e.what());
  }
}

void criterion_grid_cover() {
  const std::uint64_t expected[] = {0, 0, 3, 5, 7, 9};
  for (std::uint64_t n = 2; n <= 5; ++n) {
    const std::uint64_t got = grid_cover_min(arithmetic_grid(n));
    require(got == expected[n],
            "arithmetic " + std::to_string(n) + "-grid cover must be " +
                std::to_string(expected[n]) + ", got " + std::to_string(got));
  }
  std::mt19937_64 rng(424242);
  for (std::uint64_t n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t got = grid_cover_min(random_grid(n, rng));
      require(got >= 2 * n - 1,
              "random grid cover below the 2n-1 floor at n=" + std::to_string(n));
    }
  }
}

void criterion_sumset() {
  std::mt19937_64 rng(515151);
  for (int trial = 0; trial < 1000; ++trial) {
    std::set<Rational> a, b;
    const int na = static_cast<int>(rand_int(rng, 1, 8));
    const int nb = static_cast<int>(rand_int(rng, 1, 8));
    while (static_cast<int>(a.size()) < na) {
      a.insert(plc_test::rat(rand_int(rng, -50, 50), rand_int(rng, 1, 12)));
    }
    while (static_cast<int>(b.size()) < nb) {
      b.insert(plc_test::rat(rand_int(rng, -50, 50), rand_int(rng, 1, 12)));
    }
    SumsetInstance inst;
    inst.a.assign(a.begin(), a.end());
    inst.b.assign(b.begin(), b.end());
    require(sumset_size(inst) >= a.size() + b.size() - 1,
            "sumset below |A| + |B| - 1");
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Rational step = plc_test::rat(rand_int(rng, 1, 9), rand_int(rng, 1, 9));
    const int na = static_cast<int>(rand_int(rng, 1, 8));
    const int nb = static_cast<int>(rand_int(rng, 1, 8));
    const Rational a0 = plc_test::rat(rand_int(rng, -20, 20));
    const Rational b0 = plc_test::rat(rand_int(rng, -20, 20));
    SumsetInstance inst;
    for (int i = 0; i < na; ++i) inst.a.push_back(Rational(a0 + i * step));
    for (int i = 0; i < nb; ++i) inst.b.push_back(Rational(b0 + i * step));
    require(sumset_size(inst) == static_cast<std::uint64_t>(na + nb - 1),
            "aligned arithmetic progressions must attain equality");
  }
}

void criterion_incidence_bound() {
  std::mt19937_64 rng(616161);
  std::vector<GridSpec> grids;
  for (int trial = 0; trial < 100; ++trial) {
    grids.push_back(
        random_families(rand_int(rng, 4, 8), rand_int(rng, 2, 5), rng));
  }
  const IncidenceReport report =
      incidence_bound_report(grids, plc_test::rat(1, 13));
  char buf[128];
  std::snprintf(buf, sizeof buf, "min ratio %.6f, median %.6f over 100 samples",
                report.min_ratio, report.median_ratio);
  note(buf);
}

void criterion_fixed_point() {
  const auto trace = fixed_point_trace(Rational(0), 20);
  const Rational tenth = plc_test::rat(1, 10);
  BigInt pow6 = 1;
  for (int j = 0; j <= 20; ++j) {
    Rational expected = tenth - tenth / Rational(pow6);
    expected.canonicalize();
    require(cmp(trace[static_cast<std::size_t>(j)], expected) == 0,
            "trace diverges from the closed form at step " + std::to_string(j));
    pow6 *= 6;
  }
  const Rational residual = tenth - trace[20];
  require(cmp(residual, plc_test::rat(1, 1000000000)) < 0,
          "after 20 iterations the distance to 1/10 must be below 1e-9");
}

void criterion_measured_reports() {
  const fs::path a = fresh_dir("reports_a");
  const fs::path b = fresh_dir("reports_b");
  RunConfig rc;
  rc.max_stage = 4;
  rc.workers = 2;
  rc.out_dir = a;
  require(quiet_run(rc).exit_code == exit_ok, "report run failed");
  rc.out_dir = b;
  require(quiet_run(rc).exit_code == exit_ok, "report rerun failed");

  const std::string ja = slurp(a / "bounds.json");
  require(ja == slurp(b / "bounds.json"), "analytics must be identical across reruns");

  const auto parsed = nlohmann::json::parse(ja);
  require(parsed["degree_gain"].size() == 3, "three degree-gain records expected");
  for (const auto& row : parsed["degree_gain"]) {
    require(row["degree_gain_min_ratio"].get<double>() > 0.0,
            "degree gain ratio must be strictly positive");
    require(row["point_growth_ratio"].get<double>() > 0.0,
            "point growth ratio must be strictly positive");
  }
  require(!parsed["pencil_samples"].empty(), "pencil samples must be emitted");
  for (const auto& row : parsed["pencil_samples"]) {
    require(row["ratio"].get<double>() > 0.0, "pencil ratio must be positive");
  }
  require(!parsed["growth"]["rows"].empty(), "growth rows must be emitted");
}

void criterion_determinism() {
  std::vector<fs::path> dirs;
  for (int workers : {1, 2, 8}) {
    const fs::path dir = fresh_dir("workers_" + std::to_string(workers));
    RunConfig rc;
    rc.max_stage = 4;
    rc.workers = workers;
    rc.out_dir = dir;
    require(quiet_run(rc).exit_code == exit_ok,
            "determinism run failed with workers=" + std::to_string(workers));
    dirs.push_back(dir);
  }
  for (int k = 1; k <= 4; ++k) {
    const std::string name = "stage_" + std::to_string(k) + ".snap";
    const std::string base = slurp(dirs[0] / name);
    for (std::size_t d = 1; d < dirs.size(); ++d) {
      require(slurp(dirs[d] / name) == base,
              name + " differs between worker counts");
    }
  }
  const std::string stats = mask_timings(slurp(dirs[0] / "stats.csv"));
  const std::string bounds = slurp(dirs[0] / "bounds.json");
  for (std::size_t d = 1; d < dirs.size(); ++d) {
    require(mask_timings(slurp(dirs[d] / "stats.csv")) == stats,
            "stats differ between worker counts (timings excluded)");
    require(slurp(dirs[d] / "bounds.json") == bounds,
            "analytics differ between worker counts");
  }
}

void criterion_persistence() {
  const fs::path direct = fresh_dir("persist_direct");
  RunConfig rc;
  rc.max_stage = 4;
  rc.workers = 2;
  rc.out_dir = direct;
  require(quiet_run(rc).exit_code == exit_ok, "direct run failed");

  for (int k = 1; k <= 4; ++k) {
    const fs::path file = direct / ("stage_" + std::to_string(k) + ".snap");
    const std::string text = slurp(file);
    const Snapshot snap = parse_snapshot(text);
    require(render_snapshot(snap) == text,
            "snapshot render/parse must be the identity on stage " +
                std::to_string(k));
  }

  for (int resume_at : {2, 3}) {
    const fs::path dir =
        fresh_dir("persist_resume_" + std::to_string(resume_at));
    RunConfig overrides;
    overrides.max_stage = 4;
    overrides.workers = 2;
    overrides.out_dir = dir;
    std::ostringstream log;
    const RunResult r = resume_run(
        direct / ("stage_" + std::to_string(resume_at) + ".snap"), overrides,
        std::nullopt, log);
    require(r.exit_code == exit_ok, "resume failed");
    for (int k = resume_at + 1; k <= 4; ++k) {
      const std::string name = "stage_" + std::to_string(k) + ".snap";
      require(slurp(dir / name) == slurp(direct / name),
              "resumed " + name + " differs from the direct run");
    }
    // overlapping stats rows agree once timings are excluded
    const std::string resumed_csv = mask_timings(slurp(dir / "stats.csv"));
    const std::string direct_csv = mask_timings(slurp(direct / "stats.csv"));
    std::istringstream lines(resumed_csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      require(direct_csv.find("\n" + line + "\n") != std::string::npos,
              "resumed stats row missing from the direct run: " + line);
    }
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "exact stage counts (4,6) -> (7,9), delta=3, max line degree 3",
       criterion_stage_counts, 1.0},
      {2, "incremental == naive oracle on 20 random starts through stage 3",
       criterion_oracle_equivalence, 120.0},
      {3, "constant-free inequality suite through stage 4, stage 5 budgeted",
       criterion_theorem_suite, 300.0},
      {4, "grid cover minimum: 2n-1 arithmetic, >= 2n-1 random",
       criterion_grid_cover, 60.0},
      {5, "sumset floor |A|+|B|-1 on 1000 instances, equality on APs",
       criterion_sumset, 10.0},
      {6, "incidence ratio >= 1/13 on 100 random family systems",
       criterion_incidence_bound, 60.0},
      {7, "fixed point: 20 exact iterations match the closed form",
       criterion_fixed_point},
      {8, "measured ratio reports emitted, positive, stable across reruns",
       criterion_measured_reports},
      {9, "bit-identical artifacts with 1, 2 and 8 workers through stage 4",
       criterion_determinism},
      {10, "snapshot round-trip and interrupt/resume equivalence",
       criterion_persistence},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    std::string error;
    g_detail.clear();
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - t0).count();
    if (error.empty() && c.time_limit_s > 0.0 && elapsed > c.time_limit_s) {
      std::ostringstream os;
      os << "exceeded the " << c.time_limit_s << " s budget";
      error = os.str();
    }
    if (error.empty()) {
      std::printf("[pass] criterion %2d: %s (%.2fs)\n%s", c.id, c.title.c_str(),
                  elapsed, g_detail.c_str());
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.2fs)\n        %s\n", c.id,
                  c.title.c_str(), elapsed, error.c_str());
    }
  }
  if (failures != 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
