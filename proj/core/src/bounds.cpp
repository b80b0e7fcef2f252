#include "plc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plc/errors.hpp"

namespace plc {

namespace {

BigInt choose2(std::uint64_t x) {
  BigInt b(static_cast<unsigned long>(x));
  return b * (b - 1) / 2;
}

BigInt pow4(std::uint64_t x) {
  BigInt b(static_cast<unsigned long>(x));
  return b * b * b * b;
}

}  // namespace

bool StageCheck::all_ok() const {
  return strict_growth_ok && min_degree_ok && degree_recurrence_ok &&
         point_pair_bound_ok && line_pair_bound_ok && point_quartic_ok &&
         line_quartic_ok && envelope_ok;
}

std::string StageCheck::first_failure() const {
  if (!strict_growth_ok) return "strict growth (n must gain at least one point)";
  if (!min_degree_ok) return "minimum point degree >= 3";
  if (!degree_recurrence_ok) return "degree recurrence min(n-1, 2*delta-3)";
  if (!point_pair_bound_ok) return "point count <= C(line count, 2)";
  if (!line_pair_bound_ok) return "line count <= C(point count, 2)";
  if (!point_quartic_ok) return "8 * n_next < n^4";
  if (!line_quartic_ok) return "8 * m_next < m^4";
  if (!envelope_ok) return "upper envelope n <= 4^(4^k)";
  return "";
}

bool count_envelope_holds(const StageStats& s) {
  if (s.stage >= 3) return true;  // 4^(4^3) > 2^64 > any stored count
  if (s.stage == 2) return s.point_count <= (1ull << 32);  // 4^16
  return s.point_count <= 256;  // 4^4
}

StageCheck check_first_stage(const StageStats& cur) {
  StageCheck c;
  c.stage = cur.stage;
  c.has_previous = false;
  c.min_degree_ok = cur.min_point_degree >= 3;
  c.envelope_ok = count_envelope_holds(cur);
  c.assumption_parallel_free = cur.parallel_pairs == 0;
  return c;
}

StageCheck check_stage_bounds(const StageStats& prev, const StageStats& cur) {
  StageCheck c;
  c.stage = cur.stage;
  c.has_previous = true;
  c.strict_growth_ok = cur.point_count >= prev.point_count + 1;
  c.min_degree_ok = cur.min_point_degree >= 3;
  c.degree_recurrence_ok = cur.min_point_degree >= degree_recurrence_bound(prev);
  c.point_pair_bound_ok =
      BigInt(static_cast<unsigned long>(cur.point_count)) <= choose2(prev.line_count);
  c.line_pair_bound_ok =
      BigInt(static_cast<unsigned long>(cur.line_count)) <= choose2(cur.point_count);
  c.point_quartic_ok =
      BigInt(static_cast<unsigned long>(cur.point_count)) * 8 < pow4(prev.point_count);
  c.line_quartic_ok =
      BigInt(static_cast<unsigned long>(cur.line_count)) * 8 < pow4(prev.line_count);
  c.envelope_ok = count_envelope_holds(cur);
  c.assumption_parallel_free =
      prev.parallel_pairs == 0 && cur.parallel_pairs == 0;
  return c;
}

void enforce(const StageCheck& check) {
  const std::string failed = check.first_failure();
  if (failed.empty()) return;
  std::ostringstream os;
  os << "stage " << check.stage << " violates: " << failed;
  throw TheoremViolation(os.str());
}

DegreeGainRecord measure_degree_gain(const Configuration& prev,
                                     const Configuration& cur) {
  const std::size_t n_prev = prev.points.size();
  if (n_prev == 0 || cur.points.size() < n_prev) {
    throw AssertionFailure("degree gain needs consecutive configurations");
  }
  // appended batches keep indices stable; spot-check the shared prefix
  if (prev.points.front() != cur.points.front() ||
      prev.points[n_prev - 1] != cur.points[n_prev - 1]) {
    throw TheoremViolation("point identity lost between stages");
  }

  std::uint64_t delta_prev = UINT64_MAX;
  for (const auto& pencil : prev.lines_of_point) {
    delta_prev = std::min<std::uint64_t>(delta_prev, pencil.size());
  }

  DegreeGainRecord rec;
  rec.from_stage = prev.stage;
  double min_ratio = 0.0;
  for (std::size_t i = 0; i < n_prev; ++i) {
    const double d_prev = static_cast<double>(prev.lines_of_point[i].size());
    const double d_cur = static_cast<double>(cur.lines_of_point[i].size());
    const double r = d_cur / (static_cast<double>(delta_prev) *
                              std::sqrt(static_cast<double>(n_prev) / d_prev));
    if (i == 0 || r < min_ratio) min_ratio = r;
  }
  rec.degree_gain_min_ratio = min_ratio;
  rec.point_growth_ratio =
      static_cast<double>(cur.points.size()) /
      (std::pow(static_cast<double>(delta_prev), 1.5) *
       std::sqrt(static_cast<double>(n_prev)));
  if (!(rec.degree_gain_min_ratio > 0.0) || !(rec.point_growth_ratio > 0.0)) {
    throw AssertionFailure("degree gain ratios must be strictly positive");
  }
  return rec;
}

std::vector<IncidenceSample> extract_pencil_samples(const Configuration& c,
                                                    std::size_t max_samples) {
  std::vector<IncidenceSample> out;
  if (c.points.empty()) return out;
  std::uint64_t delta = UINT64_MAX;
  for (const auto& pencil : c.lines_of_point) {
    delta = std::min<std::uint64_t>(delta, pencil.size());
  }
  if (delta < 3) return out;  // need k = delta - 1 >= 2
  const std::uint64_t k = delta - 1;

  for (std::uint32_t pi = 0; pi < c.points.size() && out.size() < max_samples;
       ++pi) {
    // the busiest line through pi, ties to the earliest
    std::size_t best_line = SIZE_MAX;
    std::uint64_t best_s = 0;
    for (std::uint32_t li : c.lines_of_point[pi]) {
      const std::uint64_t s = c.points_of_line[li].size() - 1;
      if (s >= 4 && s > best_s) {
        best_s = s;
        best_line = li;
      }
    }
    if (best_line == SIZE_MAX) continue;

    // one pencil per carrier point: its lines minus the carrier line,
    // truncated to the k lexicographically smallest
    std::vector<std::vector<std::uint32_t>> pencils;
    bool eligible = true;
    for (std::uint32_t qi : c.points_of_line[best_line]) {
      if (qi == pi) continue;
      std::vector<std::uint32_t> lines;
      for (std::uint32_t li : c.lines_of_point[qi]) {
        if (li != best_line) lines.push_back(li);
      }
      if (lines.size() < k) {
        eligible = false;
        break;
      }
      std::sort(lines.begin(), lines.end(),
                [&](std::uint32_t x, std::uint32_t y) {
                  return c.lines[x] < c.lines[y];
                });
      lines.resize(k);
      pencils.push_back(std::move(lines));
    }
    if (!eligible || pencils.size() < 4) continue;

    std::set<Point> meets;
    const auto& reference = pencils.front();
    for (std::size_t fi = 1; fi < pencils.size(); ++fi) {
      for (std::uint32_t lo : pencils[fi]) {
        for (std::uint32_t lr : reference) {
          // distinct pencils never share a line (it would join two points
          // of the carrier line and hence be the carrier line itself)
          meets.insert(meet(c.lines[lr], c.lines[lo]));
        }
      }
    }
    IncidenceSample s;
    s.label = "stage " + std::to_string(c.stage) + " pencil of point " +
              std::to_string(pi);
    s.families = pencils.size();
    s.lines_per_family = k;
    s.point_count = meets.size();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Rational> fixed_point_trace(const Rational& start, int iterations) {
  if (sgn(start) < 0) {
    throw std::invalid_argument("fixed point trace starts at a nonnegative value");
  }
  std::vector<Rational> trace;
  trace.reserve(static_cast<std::size_t>(iterations) + 1);
  trace.push_back(start);
  Rational e = start;
  for (int i = 0; i < iterations; ++i) {
    e = (Rational(1) + Rational(2) * e) / Rational(12);
    e.canonicalize();
    trace.push_back(e);
  }
  return trace;
}

std::string growth_band_low(int digits) {
  if (digits < 1) digits = 1;
  // sqrt(11/10) to `digits` significant digits
  mpf_class x(0, static_cast<unsigned>(digits) * 4 + 64);
  x = 11;
  x /= 10;
  mpf_class r(0, x.get_prec());
  mpf_sqrt(r.get_mpf_t(), x.get_mpf_t());
  mp_exp_t exp10 = 0;
  std::string mant = r.get_str(exp10, 10, static_cast<std::size_t>(digits));
  // value is 0.mant * 10^exp10 and 1 <= sqrt(1.1) < 10, so exp10 == 1
  std::string out = mant.substr(0, static_cast<std::size_t>(exp10));
  out += ".";
  out += mant.substr(static_cast<std::size_t>(exp10));
  return out;
}

EnvelopeReport envelope_report(const std::vector<StageStats>& stats,
                               int band_digits) {
  EnvelopeReport rep;
  rep.band_low = growth_band_low(band_digits);
  const double log4 = std::log(4.0);
  for (const auto& s : stats) {
    if (!count_envelope_holds(s)) {
      std::ostringstream os;
      os << "stage " << s.stage << " violates: upper envelope n <= 4^(4^k)";
      throw TheoremViolation(os.str());
    }
    GrowthRow row;
    row.stage = s.stage;
    row.points = s.point_count;
    row.log4_points = std::log(static_cast<double>(s.point_count)) / log4;
    row.log4_log4_points = std::log(row.log4_points) / log4;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < stats.size(); ++i) {
    const double a = std::log(static_cast<double>(stats[i].point_count));
    const double b = std::log(static_cast<double>(stats[i + 1].point_count));
    rep.exponents.push_back({stats[i].stage, b / a});
  }
  return rep;
}

std::string analytics_json(const AnalyticsBundle& bundle) {
  using json = nlohmann::ordered_json;
  json root;

  root["stages"] = json::array();
  for (const auto& s : bundle.stats) {
    json row;
    row["stage"] = s.stage;
    row["points"] = s.point_count;
    row["lines"] = s.line_count;
    row["min_point_degree"] = s.min_point_degree;
    row["max_point_degree"] = s.max_point_degree;
    row["min_line_degree"] = s.min_line_degree;
    row["max_line_degree"] = s.max_line_degree;
    row["parallel_pairs"] = s.parallel_pairs;
    row["max_coord_bits"] = s.max_coord_bits;
    row["degree_floor_next"] = degree_recurrence_bound(s);
    root["stages"].push_back(std::move(row));
  }

  root["checks"] = json::array();
  for (const auto& c : bundle.checks) {
    json row;
    row["stage"] = c.stage;
    row["has_previous"] = c.has_previous;
    row["strict_growth_ok"] = c.strict_growth_ok;
    row["min_degree_ok"] = c.min_degree_ok;
    row["degree_recurrence_ok"] = c.degree_recurrence_ok;
    row["point_pair_bound_ok"] = c.point_pair_bound_ok;
    row["line_pair_bound_ok"] = c.line_pair_bound_ok;
    row["point_quartic_ok"] = c.point_quartic_ok;
    row["line_quartic_ok"] = c.line_quartic_ok;
    row["envelope_ok"] = c.envelope_ok;
    row["assumption_parallel_free"] = c.assumption_parallel_free;
    root["checks"].push_back(std::move(row));
  }

  root["degree_gain"] = json::array();
  for (const auto& g : bundle.degree_gain) {
    json row;
    row["from_stage"] = g.from_stage;
    row["degree_gain_min_ratio"] = g.degree_gain_min_ratio;
    row["point_growth_ratio"] = g.point_growth_ratio;
    root["degree_gain"].push_back(std::move(row));
  }

  json growth;
  growth["band_low"] = bundle.envelope.band_low;
  growth["band_high"] = bundle.envelope.band_high;
  growth["rows"] = json::array();
  for (const auto& r : bundle.envelope.rows) {
    json row;
    row["stage"] = r.stage;
    row["points"] = r.points;
    row["log4_points"] = r.log4_points;
    row["log4_log4_points"] = r.log4_log4_points;
    growth["rows"].push_back(std::move(row));
  }
  growth["exponents"] = json::array();
  for (const auto& e : bundle.envelope.exponents) {
    json row;
    row["from_stage"] = e.from_stage;
    row["log_count_ratio"] = e.log_count_ratio;
    growth["exponents"].push_back(std::move(row));
  }
  root["growth"] = std::move(growth);

  root["pencil_samples"] = json::array();
  for (std::size_t i = 0; i < bundle.pencil_samples.size(); ++i) {
    const auto& s = bundle.pencil_samples[i];
    json row;
    row["stage"] = i < bundle.pencil_stages.size() ? bundle.pencil_stages[i] : 0;
    row["label"] = s.label;
    row["families"] = s.families;
    row["lines_per_family"] = s.lines_per_family;
    row["points"] = s.point_count;
    row["ratio"] = s.ratio();
    root["pencil_samples"].push_back(std::move(row));
  }

  return root.dump(2) + "\n";
}

}  // namespace plc
