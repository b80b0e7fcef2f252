#include "plc/oracles.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "plc/errors.hpp"

namespace plc {

LineFamily make_family(const BigInt& a, const BigInt& b,
                       std::vector<Rational> offsets) {
  if (sgn(a) == 0 && sgn(b) == 0) {
    throw DegenerateGrid("family direction must not vanish");
  }
  std::sort(offsets.begin(), offsets.end());
  if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end()) {
    throw DegenerateGrid("family offsets must be distinct");
  }
  return LineFamily{normalized_line(a, b, BigInt(0)), std::move(offsets)};
}

Line family_line(const LineFamily& f, std::size_t i) {
  const Rational& o = f.offsets.at(i);
  return normalized_line(f.direction.a * o.get_den(), f.direction.b * o.get_den(),
                         o.get_num());
}

namespace {

void require_distinct_directions(const GridSpec& g) {
  std::set<Line> dirs;
  for (const auto& f : g.families) {
    if (!dirs.insert(f.direction).second) {
      throw DegenerateGrid("two families share a direction");
    }
  }
}

// exact projection of a finite point along the direction class (a : b : 0):
// the value a*x + b*y at the affine point
Rational projection(const Line& dir, const Point& p) {
  Rational v(dir.a * p.a + dir.b * p.b, p.c);
  v.canonicalize();
  return v;
}

}  // namespace

std::uint64_t grid_cover_min(const GridSpec& g) {
  if (g.families.size() != 2) {
    throw DegenerateGrid("grid cover needs exactly two families");
  }
  require_distinct_directions(g);
  const std::size_t n = g.families[0].offsets.size();
  if (n < 2 || g.families[1].offsets.size() != n) {
    throw DegenerateGrid("grid cover needs two families of equal size >= 2");
  }

  std::vector<Line> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(family_line(g.families[0], i));
    cols.push_back(family_line(g.families[1], i));
  }
  // families are not parallel, so all n^2 grid points are finite and distinct
  std::vector<Point> pts;
  pts.reserve(n * n);
  for (const auto& r : rows) {
    for (const auto& c : cols) pts.push_back(meet(r, c));
  }

  std::set<Line> candidates;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Line dir = direction_of(line_through(pts[i], pts[j]));
      if (dir == g.families[0].direction || dir == g.families[1].direction) {
        continue;
      }
      candidates.insert(std::move(dir));
    }
  }
  std::uint64_t best = pts.size();
  for (const auto& dir : candidates) {
    std::set<Rational> distinct;
    for (const auto& p : pts) distinct.insert(projection(dir, p));
    best = std::min<std::uint64_t>(best, distinct.size());
  }
  return best;
}

std::uint64_t sumset_size(const SumsetInstance& inst) {
  if (inst.a.empty() || inst.b.empty()) {
    throw std::invalid_argument("sumset needs nonempty sets");
  }
  std::set<Rational> sums;
  for (const auto& x : inst.a) {
    for (const auto& y : inst.b) sums.insert(Rational(x + y));
  }
  return sums.size();
}

std::uint64_t family_intersection_count(const GridSpec& g,
                                        std::size_t designated,
                                        bool limit_to_line_count) {
  if (g.families.size() < 2) throw DegenerateGrid("need at least two families");
  if (designated >= g.families.size()) {
    throw DegenerateGrid("designated family out of range");
  }
  require_distinct_directions(g);
  const std::size_t k = g.families[0].offsets.size();
  for (const auto& f : g.families) {
    if (f.offsets.size() != k) {
      throw DegenerateGrid("families must have equal size");
    }
  }

  std::vector<Line> base;
  for (std::size_t i = 0; i < k; ++i) {
    base.push_back(family_line(g.families[designated], i));
  }
  std::vector<std::size_t> others;
  for (std::size_t fi = 0; fi < g.families.size(); ++fi) {
    if (fi != designated) others.push_back(fi);
  }
  if (limit_to_line_count && others.size() + 1 > k) {
    others.resize(k > 0 ? k - 1 : 0);
  }

  std::set<Point> pts;
  for (std::size_t fi : others) {
    for (std::size_t i = 0; i < k; ++i) {
      Line l = family_line(g.families[fi], i);
      for (const auto& b : base) pts.insert(meet(b, l));
    }
  }
  return pts.size();
}

double IncidenceSample::ratio() const {
  const double k2 = static_cast<double>(lines_per_family) *
                    static_cast<double>(lines_per_family);
  return static_cast<double>(point_count) /
         (k2 * std::sqrt(static_cast<double>(families)));
}

IncidenceReport incidence_bound_report(std::vector<IncidenceSample> samples,
                                       const Rational& threshold) {
  if (sgn(threshold) < 0) {
    throw std::invalid_argument("threshold must be nonnegative");
  }
  const BigInt num = threshold.get_num();
  const BigInt den = threshold.get_den();
  for (const auto& s : samples) {
    // |P| / (k^2 sqrt(N)) >= num/den  <=>  |P|^2 den^2 >= num^2 k^4 N
    const BigInt p(static_cast<unsigned long>(s.point_count));
    const BigInt k(static_cast<unsigned long>(s.lines_per_family));
    const BigInt n(static_cast<unsigned long>(s.families));
    if (p * p * den * den < num * num * k * k * k * k * n) {
      std::ostringstream os;
      os << "incidence sample '" << s.label << "' (N=" << s.families
         << ", k=" << s.lines_per_family << ", |P|=" << s.point_count
         << ") falls below threshold " << num << "/" << den;
      throw AssertionFailure(os.str());
    }
  }
  IncidenceReport report;
  report.threshold = threshold;
  report.samples = std::move(samples);
  std::vector<double> ratios;
  ratios.reserve(report.samples.size());
  for (const auto& s : report.samples) ratios.push_back(s.ratio());
  std::sort(ratios.begin(), ratios.end());
  if (!ratios.empty()) {
    report.min_ratio = ratios.front();
    const std::size_t h = ratios.size() / 2;
    report.median_ratio = (ratios.size() % 2 == 1)
                              ? ratios[h]
                              : (ratios[h - 1] + ratios[h]) / 2.0;
  }
  return report;
}

IncidenceReport incidence_bound_report(const std::vector<GridSpec>& grids,
                                       const Rational& threshold) {
  std::vector<IncidenceSample> samples;
  samples.reserve(grids.size());
  for (const auto& g : grids) {
    IncidenceSample s;
    s.label = g.label;
    s.families = g.families.size();
    s.lines_per_family = g.families.empty() ? 0 : g.families[0].offsets.size();
    s.point_count = family_intersection_count(g);
    samples.push_back(std::move(s));
  }
  return incidence_bound_report(std::move(samples), threshold);
}

std::int64_t rand_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

GridSpec arithmetic_grid(std::uint64_t n) {
  std::vector<Rational> offsets;
  for (std::uint64_t i = 0; i < n; ++i) offsets.emplace_back(static_cast<long>(i));
  GridSpec g;
  g.families.push_back(make_family(1, 0, offsets));
  g.families.push_back(make_family(0, 1, offsets));
  g.label = "arithmetic " + std::to_string(n) + "x" + std::to_string(n);
  return g;
}

namespace {

Line random_direction(std::mt19937_64& rng) {
  for (;;) {
    const auto a = rand_int(rng, -9, 9);
    const auto b = rand_int(rng, -9, 9);
    if (a == 0 && b == 0) continue;
    return normalized_line(BigInt(static_cast<long>(a)),
                           BigInt(static_cast<long>(b)), BigInt(0));
  }
}

std::vector<Rational> random_offsets(std::uint64_t count, std::mt19937_64& rng) {
  std::set<Rational> seen;
  while (seen.size() < count) {
    Rational o(static_cast<long>(rand_int(rng, -40, 40)),
               static_cast<long>(rand_int(rng, 1, 6)));
    o.canonicalize();
    seen.insert(o);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

GridSpec random_grid(std::uint64_t n, std::mt19937_64& rng) {
  GridSpec g;
  std::set<Line> dirs;
  while (g.families.size() < 2) {
    Line d = random_direction(rng);
    if (!dirs.insert(d).second) continue;
    g.families.push_back(make_family(d.a, d.b, random_offsets(n, rng)));
  }
  g.label = "random " + std::to_string(n) + "x" + std::to_string(n);
  return g;
}

GridSpec random_families(std::uint64_t n_families, std::uint64_t lines_each,
                         std::mt19937_64& rng) {
  GridSpec g;
  std::set<Line> dirs;
  while (g.families.size() < n_families) {
    Line d = random_direction(rng);
    if (!dirs.insert(d).second) continue;
    g.families.push_back(make_family(d.a, d.b, random_offsets(lines_each, rng)));
  }
  g.label = "random N=" + std::to_string(n_families) +
            " k=" + std::to_string(lines_each);
  return g;
}

}  // namespace plc
