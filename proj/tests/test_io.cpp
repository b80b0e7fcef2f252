#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "plc/engine.hpp"
#include "plc/run.hpp"
#include "plc/snapshot.hpp"
#include "plc/svg.hpp"
#include "test_util.hpp"

using namespace plc;
using plc_test::rat;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("plc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Snapshot stage_snapshot(int stages) {
  Configuration c = init(canonical_start());
  for (int i = 1; i < stages; ++i) c = run_stage(c, ParallelPolicy::skip).first;
  return make_snapshot(c, canonical_start(), ParallelPolicy::skip);
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("snapshots round-trip losslessly") {
  const Snapshot s = stage_snapshot(2);
  const std::string text = render_snapshot(s);
  const Snapshot back = parse_snapshot(text);
  CHECK(back == s);
  CHECK(render_snapshot(back) == text);

  const Configuration rebuilt = to_configuration(back);
  check_consistency(rebuilt);
  CHECK(rebuilt.points.size() == 7);
  CHECK(rebuilt.lines.size() == 9);
}

TEST_CASE("snapshot integrity failures are typed") {
  const std::string good = render_snapshot(stage_snapshot(2));

  std::string corrupted = good;
  const auto pos = corrupted.find("P ");
  REQUIRE(pos != std::string::npos);
  corrupted[pos + 2] = corrupted[pos + 2] == '1' ? '2' : '1';
  CHECK_THROWS_AS(parse_snapshot(corrupted), ChecksumMismatch);

  Snapshot future = stage_snapshot(2);
  future.version = 2;
  CHECK_THROWS_AS(parse_snapshot(render_snapshot(future)), VersionMismatch);

  CHECK_THROWS_AS(parse_snapshot("PLC 1\nno\n"), SnapshotParseError);
}

TEST_CASE("svg rendering clips exactly and deterministically") {
  const Snapshot s2 = stage_snapshot(2);

  // all seven points fit: (5,7) and (0,-7/4) need the wider window
  const std::string wide = render_svg(s2, parse_viewport("-1:6,-2:8"));
  CHECK(count_of(wide, "<circle") == 7);
  CHECK(count_of(wide, "<line") == 9);

  // (5,7) and (0,-7/4) fall outside this one
  const std::string tight = render_svg(s2, parse_viewport("-1:3,-1:8"));
  CHECK(count_of(tight, "<circle") == 5);
  CHECK(count_of(tight, "<line") == 9);

  const Snapshot s1 = stage_snapshot(1);
  const std::string start = render_svg(s1, parse_viewport("-1:6,-2:8"));
  CHECK(count_of(start, "<circle") == 4);
  CHECK(count_of(start, "<line") == 6);

  // a window with no points still draws the lines that cross it: here the
  // three lines through (5,7) do, the triangle sides do not
  const std::string empty = render_svg(s1, parse_viewport("2:3,2:8"));
  CHECK(count_of(empty, "<circle") == 0);
  CHECK(count_of(empty, "<line") == 3);

  CHECK(render_svg(s2, parse_viewport("-1:6,-2:8")) == wide);
  CHECK_THROWS_AS(render_svg(s2, parse_viewport("3:-1,0:1")), EmptyViewport);
  CHECK_THROWS_AS(parse_viewport("nonsense"), std::invalid_argument);
}

TEST_CASE("points at infinity are listed in the legend") {
  Configuration c = init(StartConfig{{RatPoint{rat(0), rat(0)},
                                      RatPoint{rat(1), rat(0)},
                                      RatPoint{rat(1), rat(1)},
                                      RatPoint{rat(0), rat(1)}}},
                         ParallelPolicy::projective);
  c = run_stage(c, ParallelPolicy::projective).first;
  const Snapshot snap = make_snapshot(c, canonical_start(), ParallelPolicy::projective);
  const std::string svg = render_svg(snap, parse_viewport("-1:2,-1:2"));
  CHECK(count_of(svg, "point at infinity") == 2);
  CHECK(count_of(svg, "line at infinity") == 1);
}

TEST_CASE("run driver writes snapshots, stats and analytics") {
  const fs::path dir = fresh_dir("iterate");
  RunConfig rc;
  rc.max_stage = 3;
  rc.out_dir = dir;
  rc.workers = 2;
  std::ostringstream log;
  const RunResult r = run_iterate(rc, log);
  CHECK(r.exit_code == exit_ok);
  REQUIRE(r.stats.size() == 3);
  CHECK(r.stats[2].point_count == 13);
  CHECK(r.stats[2].line_count == 25);

  const std::string csv = slurp(dir / "stats.csv");
  CHECK(csv.rfind("k,n_k,m_k,delta_k,Delta_k,deltabar_k,Deltabar_k,"
                  "parallel_pairs_skipped,max_coord_bits,thm4_bound,"
                  "intersect_ms,connect_ms\n",
                  0) == 0);
  CHECK(csv.find("\n1,4,6,3,3,2,2,0,3,3,") != std::string::npos);
  CHECK(csv.find("\n2,7,9,3,4,2,3,0,7,3,") != std::string::npos);
  CHECK(csv.find("\n3,13,25,4,6,2,4,3,8,5,") != std::string::npos);

  const std::string json = slurp(dir / "bounds.json");
  CHECK(json.find("\"assumption_parallel_free\": false") != std::string::npos);
  CHECK(json.find("\"strict_growth_ok\": true") != std::string::npos);

  for (int k = 1; k <= 3; ++k) {
    CHECK(fs::exists(dir / ("stage_" + std::to_string(k) + ".snap")));
  }
}

TEST_CASE("budget stops are resumable and rejoin the direct run exactly") {
  const fs::path direct_dir = fresh_dir("direct");
  RunConfig direct;
  direct.max_stage = 3;
  direct.out_dir = direct_dir;
  std::ostringstream log;
  CHECK(run_iterate(direct, log).exit_code == exit_ok);

  const fs::path capped_dir = fresh_dir("capped");
  RunConfig capped = direct;
  capped.out_dir = capped_dir;
  capped.budget.max_points = 10;  // stage 3 needs 13 points
  const RunResult r = run_iterate(capped, log);
  CHECK(r.exit_code == exit_budget_exceeded);
  CHECK(fs::exists(capped_dir / "stage_2.snap"));
  CHECK_FALSE(fs::exists(capped_dir / "stage_3.snap"));

  const fs::path resumed_dir = fresh_dir("resumed");
  RunConfig overrides;
  overrides.max_stage = 3;
  overrides.out_dir = resumed_dir;
  const RunResult rr =
      resume_run(capped_dir / "stage_2.snap", overrides, std::nullopt, log);
  CHECK(rr.exit_code == exit_ok);
  CHECK(slurp(resumed_dir / "stage_3.snap") == slurp(direct_dir / "stage_3.snap"));
}

TEST_CASE("invalid and degenerate starts map to the right exit codes") {
  std::ostringstream log;
  const StartConfig square{{RatPoint{rat(0), rat(0)}, RatPoint{rat(1), rat(0)},
                            RatPoint{rat(1), rat(1)}, RatPoint{rat(0), rat(1)}}};

  RunConfig rc;
  rc.start = square;
  rc.policy = ParallelPolicy::error;
  rc.out_dir = fresh_dir("square_error");
  CHECK(run_iterate(rc, log).exit_code == exit_invalid_input);

  rc.policy = ParallelPolicy::skip;
  rc.max_stage = 3;
  rc.out_dir = fresh_dir("square_skip");
  const RunResult r = run_iterate(rc, log);
  CHECK(r.exit_code == exit_ok);  // stalls are warnings: parallels were met
  REQUIRE(r.stats.size() == 3);
  CHECK(r.stats[1].point_count == 5);
  CHECK(r.stats[2].point_count == 5);
  CHECK(log.str().find("warning") != std::string::npos);

  // the canonical start meets its first parallel pair during stage 3
  RunConfig strict;
  strict.policy = ParallelPolicy::error;
  strict.max_stage = 4;
  strict.out_dir = fresh_dir("strict");
  const RunResult rs = run_iterate(strict, log);
  CHECK(rs.exit_code == exit_invalid_input);
  CHECK(fs::exists(strict.out_dir / "stage_3.snap"));
  CHECK_FALSE(fs::exists(strict.out_dir / "stage_4.snap"));
}

TEST_CASE("verify accepts good snapshots and flags corruption") {
  const fs::path dir = fresh_dir("verify");
  RunConfig rc;
  rc.max_stage = 2;
  rc.out_dir = dir;
  std::ostringstream log;
  REQUIRE(run_iterate(rc, log).exit_code == exit_ok);

  CHECK(verify_snapshot_file(dir / "stage_2.snap", log) == exit_ok);

  std::string text = slurp(dir / "stage_2.snap");
  text[text.find("P ") + 2] += 1;
  std::ofstream(dir / "bad.snap", std::ios::binary) << text;
  CHECK(verify_snapshot_file(dir / "bad.snap", log) == exit_integrity_failure);
  CHECK(verify_snapshot_file(dir / "missing.snap", log) == exit_integrity_failure);
}

TEST_CASE("run configuration files parse and validate") {
  const fs::path dir = fresh_dir("config");
  const fs::path file = dir / "run.conf";
  std::ofstream(file) << "# fixture\n"
                      << "start = 0,0 1,0 0,1 5,7\n"
                      << "max_stage = 5\n"
                      << "policy = projective\n"
                      << "workers = 3\n"
                      << "max_points = 1000\n"
                      << "max_lines = 2000\n"
                      << "max_coord_bits = 64\n"
                      << "out_dir = somewhere\n";
  const RunConfig rc = load_run_config(file);
  CHECK(rc.max_stage == 5);
  CHECK(rc.policy == ParallelPolicy::projective);
  CHECK(rc.workers == 3);
  CHECK(rc.budget.max_points == 1000);
  CHECK(rc.budget.max_lines == 2000);
  CHECK(rc.budget.max_coord_bits == 64);
  CHECK(rc.out_dir == fs::path("somewhere"));
  CHECK(cmp(rc.start.points[3].x, rat(5)) == 0);

  std::ofstream(file) << "bogus = 1\n";
  CHECK_THROWS_AS(load_run_config(file), std::invalid_argument);
  std::ofstream(file) << "start = 0,0 1,0\n";
  CHECK_THROWS_AS(load_run_config(file), std::invalid_argument);
}
