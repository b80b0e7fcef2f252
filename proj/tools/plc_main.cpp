// plc: iterated point-line closure runner and oracle toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "plc/bounds.hpp"
#include "plc/engine.hpp"
#include "plc/oracles.hpp"
#include "plc/run.hpp"
#include "plc/snapshot.hpp"
#include "plc/svg.hpp"

namespace {

// PLC_WORKERS takes priority over flags and config files
void apply_worker_env(plc::RunConfig& rc) {
  if (const char* env = std::getenv("PLC_WORKERS")) {
    try {
      const int workers = std::stoi(env);
      if (workers >= 1) rc.workers = workers;
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable PLC_WORKERS='" << env << "'\n";
    }
  }
}

struct RunFlags {
  std::string config_file;
  std::string start;
  std::string policy;
  std::string out_dir;
  int max_stage = 0;
  int workers = 0;
  std::uint64_t max_points = 0;
  std::uint64_t max_lines = 0;
  std::uint64_t max_coord_bits = 0;
  bool report_anomalies = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_start) {
  if (with_start) {
    cmd->add_option("--config", f.config_file,
                    "key=value run configuration file");
    cmd->add_option("--start", f.start,
                    "four start points \"x,y x,y x,y x,y\" (rationals)");
  }
  cmd->add_option("--max-stage", f.max_stage, "stop after reaching this stage");
  cmd->add_option("--policy", f.policy,
                  "parallel handling: error, skip or projective");
  cmd->add_option("--workers", f.workers, "worker threads for the pair sweeps");
  cmd->add_option("--max-points", f.max_points, "point budget");
  cmd->add_option("--max-lines", f.max_lines, "line budget");
  cmd->add_option("--max-coord-bits", f.max_coord_bits,
                  "coordinate bit-length budget");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_flag("--report-anomalies", f.report_anomalies,
                "log per-stage coincidence diagnostics");
}

// overlay explicitly given flags onto the base configuration
int merge_flags(const CLI::App* cmd, const RunFlags& f, plc::RunConfig& rc) {
  auto given = [cmd](const std::string& name) {
    const auto* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--start")) rc.start = plc::parse_start_points(f.start);
  if (given("--max-stage")) rc.max_stage = f.max_stage;
  if (given("--workers")) rc.workers = f.workers;
  if (given("--max-points")) rc.budget.max_points = f.max_points;
  if (given("--max-lines")) rc.budget.max_lines = f.max_lines;
  if (given("--max-coord-bits")) rc.budget.max_coord_bits = f.max_coord_bits;
  if (given("--out")) rc.out_dir = f.out_dir;
  if (given("--report-anomalies")) rc.report_anomalies = true;
  if (given("--policy")) {
    const auto p = plc::parse_policy(f.policy);
    if (!p) {
      std::cerr << "error: unknown policy '" << f.policy << "'\n";
      return plc::exit_invalid_input;
    }
    rc.policy = *p;
  }
  if (rc.max_stage < 1 || rc.workers < 1 || rc.budget.max_points == 0 ||
      rc.budget.max_lines == 0 || rc.budget.max_coord_bits == 0) {
    std::cerr << "error: stages, workers and budgets must be positive\n";
    return plc::exit_invalid_input;
  }
  return plc::exit_ok;
}

int run_oracle_grid_cover(std::uint64_t n, const std::string& spacing,
                          std::uint64_t seed, int trials) {
  if (spacing != "arithmetic" && spacing != "random") {
    std::cerr << "error: --spacing must be arithmetic or random\n";
    return plc::exit_invalid_input;
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const plc::GridSpec g = spacing == "arithmetic"
                                ? plc::arithmetic_grid(n)
                                : plc::random_grid(n, rng);
    const std::uint64_t cover = plc::grid_cover_min(g);
    std::cout << cover << "\n";
    std::cerr << g.label << ": " << cover
              << " covering lines needed (floor 2n-1 = " << 2 * n - 1 << ")\n";
  }
  return plc::exit_ok;
}

std::vector<plc::Rational> parse_rational_list(const std::string& text) {
  std::vector<plc::Rational> out;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) out.push_back(plc::parse_rational(tok));
  return out;
}

int run_oracle_sumset(const std::string& a, const std::string& b) {
  plc::SumsetInstance inst{parse_rational_list(a), parse_rational_list(b)};
  const std::uint64_t size = plc::sumset_size(inst);
  std::cout << size << "\n";
  std::cerr << "|A| = " << inst.a.size() << ", |B| = " << inst.b.size()
            << ", |A+B| = " << size << " (floor |A|+|B|-1 = "
            << inst.a.size() + inst.b.size() - 1 << ")\n";
  return plc::exit_ok;
}

int run_oracle_incidence(std::uint64_t families, std::uint64_t lines,
                         std::uint64_t seed, int samples,
                         const std::string& threshold, bool limited_range) {
  std::mt19937_64 rng(seed);
  std::vector<plc::IncidenceSample> rows;
  for (int i = 0; i < samples; ++i) {
    const plc::GridSpec g = plc::random_families(families, lines, rng);
    plc::IncidenceSample s;
    s.label = g.label + " #" + std::to_string(i);
    s.families = families;
    s.lines_per_family = lines;
    s.point_count = plc::family_intersection_count(g, 0, limited_range);
    rows.push_back(std::move(s));
  }
  const auto report =
      plc::incidence_bound_report(std::move(rows), plc::parse_rational(threshold));
  for (const auto& s : report.samples) {
    std::cout << s.point_count << " " << s.ratio() << "\n";
  }
  std::cerr << "min ratio " << report.min_ratio << ", median "
            << report.median_ratio << ", threshold "
            << plc::rational_string(report.threshold) << "\n";
  return plc::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated point-line closure: exact engine and oracles"};
  app.require_subcommand(1);

  // iterate
  auto* iterate = app.add_subcommand("iterate", "run stages from a start");
  RunFlags it_flags;
  add_run_flags(iterate, it_flags, /*with_start=*/true);

  // resume
  auto* resume = app.add_subcommand("resume", "continue from a snapshot");
  std::string resume_snapshot;
  resume->add_option("snapshot", resume_snapshot, "snapshot file")->required();
  RunFlags re_flags;
  add_run_flags(resume, re_flags, /*with_start=*/false);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "combinatorial oracles");
  oracle->require_subcommand(1);

  auto* grid_cover = oracle->add_subcommand("grid-cover",
                                            "minimum covering lines of a grid");
  std::uint64_t gc_n = 3;
  std::string gc_spacing = "arithmetic";
  std::uint64_t gc_seed = 1;
  int gc_trials = 1;
  grid_cover->add_option("--n", gc_n, "lines per family")->required();
  grid_cover->add_option("--spacing", gc_spacing, "arithmetic or random");
  grid_cover->add_option("--seed", gc_seed, "random seed");
  grid_cover->add_option("--trials", gc_trials, "number of random grids");

  auto* sumset = oracle->add_subcommand("sumset", "cardinality of A+B");
  std::string ss_a, ss_b;
  sumset->add_option("--a", ss_a, "comma-separated rationals")->required();
  sumset->add_option("--b", ss_b, "comma-separated rationals")->required();

  auto* incidence = oracle->add_subcommand(
      "incidence", "incidence count of random parallel families");
  std::uint64_t in_families = 4, in_lines = 2, in_seed = 1;
  int in_samples = 1;
  std::string in_threshold = "1/13";
  bool in_limited = false;
  incidence->add_option("--families", in_families, "number of families (N)")
      ->required();
  incidence->add_option("--lines", in_lines, "lines per family (k)")->required();
  incidence->add_option("--seed", in_seed, "random seed");
  incidence->add_option("--samples", in_samples, "number of samples");
  incidence->add_option("--c", in_threshold, "asserted ratio floor (rational)");
  incidence->add_flag("--limited-range", in_limited,
                      "count only the first k-1 non-designated families");

  // render
  auto* render = app.add_subcommand("render", "draw a snapshot as SVG");
  std::string render_snapshot_path, render_viewport = "-1:6,-2:8", render_out;
  render->add_option("snapshot", render_snapshot_path, "snapshot file")
      ->required();
  render->add_option("--viewport", render_viewport,
                     "window \"xmin:xmax,ymin:ymax\" (rationals)");
  render->add_option("--out", render_out, "output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "re-check a snapshot's invariants");
  std::string verify_snapshot;
  verify->add_option("snapshot", verify_snapshot, "snapshot file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (iterate->parsed()) {
      plc::RunConfig rc;
      if (iterate->count("--config")) {
        rc = plc::load_run_config(it_flags.config_file);
      }
      if (const int rcde = merge_flags(iterate, it_flags, rc);
          rcde != plc::exit_ok) {
        return rcde;
      }
      apply_worker_env(rc);
      return plc::run_iterate(rc, std::cerr).exit_code;
    }

    if (resume->parsed()) {
      plc::RunConfig rc;
      std::optional<plc::ParallelPolicy> policy_override;
      if (resume->count("--policy")) {
        const auto p = plc::parse_policy(re_flags.policy);
        if (!p) {
          std::cerr << "error: unknown policy '" << re_flags.policy << "'\n";
          return plc::exit_invalid_input;
        }
        policy_override = *p;
      }
      if (const int rcde = merge_flags(resume, re_flags, rc);
          rcde != plc::exit_ok) {
        return rcde;
      }
      apply_worker_env(rc);
      return plc::resume_run(resume_snapshot, rc, policy_override, std::cerr)
          .exit_code;
    }

    if (grid_cover->parsed()) {
      return run_oracle_grid_cover(gc_n, gc_spacing, gc_seed, gc_trials);
    }
    if (sumset->parsed()) {
      return run_oracle_sumset(ss_a, ss_b);
    }
    if (incidence->parsed()) {
      return run_oracle_incidence(in_families, in_lines, in_seed, in_samples,
                                  in_threshold, in_limited);
    }

    if (render->parsed()) {
      const plc::Snapshot snap = plc::load_snapshot(render_snapshot_path);
      const std::string svg =
          plc::render_svg(snap, plc::parse_viewport(render_viewport));
      if (render_out.empty()) {
        std::cout << svg;
      } else {
        std::ofstream out(render_out, std::ios::binary);
        if (!out) {
          std::cerr << "error: cannot write " << render_out << "\n";
          return plc::exit_integrity_failure;
        }
        out << svg;
      }
      return plc::exit_ok;
    }

    if (verify->parsed()) {
      return plc::verify_snapshot_file(verify_snapshot, std::cerr);
    }
  } catch (const plc::InvalidStart& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_invalid_input;
  } catch (const plc::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_budget_exceeded;
  } catch (const plc::TheoremViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_theorem_violation;
  } catch (const plc::AssertionFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_theorem_violation;
  } catch (const plc::ChecksumMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_integrity_failure;
  } catch (const plc::VersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_integrity_failure;
  } catch (const plc::SnapshotParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_integrity_failure;
  } catch (const plc::EmptyViewport& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_invalid_input;
  } catch (const plc::DegenerateGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_invalid_input;
  } catch (const plc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_integrity_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return plc::exit_invalid_input;
  }
  return plc::exit_ok;
}
