#include <doctest.h>

#include "plc/bounds.hpp"
#include "plc/engine.hpp"
#include "test_util.hpp"

using namespace plc;
using plc_test::rat;

TEST_CASE("stage checks pass on the canonical run and fail on forgeries") {
  Configuration c = init(canonical_start());
  std::vector<StageStats> stats{degrees(c)};
  std::vector<Configuration> cfgs{c};
  for (int i = 0; i < 3; ++i) {
    auto [next, s] = run_stage(cfgs.back(), ParallelPolicy::skip);
    cfgs.push_back(std::move(next));
    stats.push_back(s);
  }

  CHECK(check_first_stage(stats[0]).all_ok());
  for (std::size_t i = 1; i < stats.size(); ++i) {
    const StageCheck row = check_stage_bounds(stats[i - 1], stats[i]);
    CAPTURE(row.stage);
    CHECK(row.all_ok());
    CHECK_NOTHROW(enforce(row));
  }
  // stage 1 -> 2 passes with the tight values 7 >= 5 and delta = min(3, 3)
  CHECK(stats[1].point_count == 7);
  CHECK(degree_recurrence_bound(stats[0]) == 3);

  StageStats frozen = stats[1];
  frozen.point_count = stats[0].point_count;  // no growth
  const StageCheck bad = check_stage_bounds(stats[0], frozen);
  CHECK_FALSE(bad.strict_growth_ok);
  CHECK_THROWS_AS(enforce(bad), TheoremViolation);

  StageStats shallow = stats[1];
  shallow.min_point_degree = 2;
  const StageCheck bad2 = check_stage_bounds(stats[0], shallow);
  CHECK_FALSE(bad2.min_degree_ok);
  CHECK_FALSE(bad2.degree_recurrence_ok);

  StageStats huge = stats[1];
  huge.point_count = 100;  // C(6, 2) = 15 < 100 and 8*100 > 4^4
  const StageCheck bad3 = check_stage_bounds(stats[0], huge);
  CHECK_FALSE(bad3.point_pair_bound_ok);
  CHECK_FALSE(bad3.point_quartic_ok);
}

TEST_CASE("the count envelope binds only while counts can reach it") {
  StageStats s;
  s.stage = 1;
  s.point_count = 4;
  CHECK(count_envelope_holds(s));
  s.point_count = 257;
  CHECK_FALSE(count_envelope_holds(s));
  s.stage = 2;
  s.point_count = (1ull << 32);
  CHECK(count_envelope_holds(s));
  s.point_count = (1ull << 32) + 1;
  CHECK_FALSE(count_envelope_holds(s));
  s.stage = 3;
  s.point_count = UINT64_MAX;
  CHECK(count_envelope_holds(s));
}

TEST_CASE("measured degree-gain ratios match independently computed values") {
  Configuration c1 = init(canonical_start());
  Configuration c2 = run_stage(c1, ParallelPolicy::skip).first;
  Configuration c3 = run_stage(c2, ParallelPolicy::skip).first;
  Configuration c4 = run_stage(c3, ParallelPolicy::skip).first;

  const DegreeGainRecord g12 = measure_degree_gain(c1, c2);
  // all four seeds keep degree 3: 3 / (3 sqrt(4/3)) = sqrt(3)/2
  CHECK(g12.degree_gain_min_ratio == doctest::Approx(0.866025403784439).epsilon(1e-12));
  CHECK(g12.point_growth_ratio == doctest::Approx(0.673575314054563).epsilon(1e-12));

  const DegreeGainRecord g23 = measure_degree_gain(c2, c3);
  CHECK(g23.degree_gain_min_ratio == doctest::Approx(1.007905261357939).epsilon(1e-12));
  CHECK(g23.point_growth_ratio == doctest::Approx(0.945610857689300).epsilon(1e-12));

  const DegreeGainRecord g34 = measure_degree_gain(c3, c4);
  CHECK(g34.degree_gain_min_ratio == doctest::Approx(3.328201177351375).epsilon(1e-12));
  CHECK(g34.point_growth_ratio == doctest::Approx(3.328201177351375).epsilon(1e-12));

  CHECK_THROWS_AS(measure_degree_gain(c3, c2), AssertionFailure);
}

TEST_CASE("pencil samples appear once a line carries five points") {
  Configuration c = init(canonical_start());
  for (int i = 0; i < 2; ++i) c = run_stage(c, ParallelPolicy::skip).first;
  CHECK(extract_pencil_samples(c).empty());  // stage 3: max line degree 4

  c = run_stage(c, ParallelPolicy::skip).first;  // stage 4
  const auto samples = extract_pencil_samples(c);
  REQUIRE(samples.size() == 8);  // capped
  const IncidenceSample& first = samples.front();
  CHECK(first.families == 11);
  CHECK(first.lines_per_family == 23);
  CHECK(first.point_count == 3301);
  CHECK(first.ratio() == doctest::Approx(1.881453588754627).epsilon(1e-12));
  for (const auto& s : samples) {
    CHECK(s.families >= 4);
    CHECK(s.lines_per_family >= 2);
    CHECK(s.ratio() > 0.0);
  }
}

TEST_CASE("the contraction trace converges to 1/10 in exact arithmetic") {
  const auto trace = fixed_point_trace(Rational(0), 20);
  REQUIRE(trace.size() == 21);
  CHECK(cmp(trace[1], rat(1, 12)) == 0);

  // closed form from 0: e_j = 1/10 - (1/10) (1/6)^j
  const Rational tenth = rat(1, 10);
  for (int j = 0; j <= 20; ++j) {
    BigInt pow6 = 1;
    for (int i = 0; i < j; ++i) pow6 *= 6;
    Rational expected = tenth - tenth / Rational(pow6);
    expected.canonicalize();
    CHECK(cmp(trace[static_cast<std::size_t>(j)], expected) == 0);
  }
  // contraction factor exactly 1/6 per step
  for (int j = 0; j + 1 <= 20; ++j) {
    Rational a = tenth - trace[static_cast<std::size_t>(j)];
    Rational b = tenth - trace[static_cast<std::size_t>(j) + 1];
    CHECK(cmp(a, Rational(6) * b) == 0);
  }
  CHECK(cmp(tenth - trace[20], rat(1, 1000000000)) < 0);

  // 1/10 is the fixed point
  const auto fixed = fixed_point_trace(rat(1, 10), 3);
  for (const auto& e : fixed) CHECK(cmp(e, rat(1, 10)) == 0);

  CHECK_THROWS_AS(fixed_point_trace(rat(-1), 1), std::invalid_argument);
}

TEST_CASE("exponent identities hold as exact rationals") {
  Rational a = (Rational(1) + Rational(2) * rat(1, 12)) / Rational(3);
  a.canonicalize();
  CHECK(cmp(a, rat(7, 18)) == 0);
  Rational b = rat(7, 18) / Rational(4);
  b.canonicalize();
  CHECK(cmp(b, rat(7, 72)) == 0);
}

TEST_CASE("the growth band low edge is sqrt(1.1) to the requested digits") {
  CHECK(growth_band_low(17) == "1.0488088481701515");
  CHECK(growth_band_low(5) == "1.0488");
}

TEST_CASE("the envelope report tracks growth exponents") {
  Configuration c = init(canonical_start());
  std::vector<StageStats> stats{degrees(c)};
  for (int i = 0; i < 2; ++i) {
    auto [next, s] = run_stage(c, ParallelPolicy::skip);
    c = std::move(next);
    stats.push_back(s);
  }
  const EnvelopeReport rep = envelope_report(stats);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].points == 4);
  CHECK(rep.rows[0].log4_points == doctest::Approx(1.0));
  CHECK(rep.rows[0].log4_log4_points == doctest::Approx(0.0));
  REQUIRE(rep.exponents.size() == 2);
  // log 7 / log 4 and log 13 / log 7
  CHECK(rep.exponents[0].log_count_ratio ==
        doctest::Approx(std::log(7.0) / std::log(4.0)));
  CHECK(rep.exponents[1].log_count_ratio ==
        doctest::Approx(std::log(13.0) / std::log(7.0)));

  std::vector<StageStats> forged = stats;
  forged[0].point_count = 300;  // above 4^4
  CHECK_THROWS_AS(envelope_report(forged), TheoremViolation);
}

TEST_CASE("analytics JSON is deterministic and carries the ratio reports") {
  Configuration c = init(canonical_start());
  AnalyticsBundle bundle;
  bundle.stats.push_back(degrees(c));
  bundle.checks.push_back(check_first_stage(bundle.stats[0]));
  auto [c2, s2] = run_stage(c, ParallelPolicy::skip);
  bundle.stats.push_back(s2);
  bundle.checks.push_back(check_stage_bounds(bundle.stats[0], s2));
  bundle.degree_gain.push_back(measure_degree_gain(c, c2));
  bundle.envelope = envelope_report(bundle.stats);
  const std::string a = analytics_json(bundle);
  const std::string b = analytics_json(bundle);
  CHECK(a == b);
  CHECK(a.find("degree_gain_min_ratio") != std::string::npos);
  CHECK(a.find("point_growth_ratio") != std::string::npos);
  CHECK(a.find("\"band_low\"") != std::string::npos);
}
