#include "plc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>
#include <vector>

namespace plc {
namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// ---------------------------------------------------------------------------
// Candidate pair enumeration.
//
// A step enumerates pairs (i, j) with lo <= j and 0 <= i < j, ranked by
// (j, i). With T(x) = x(x-1)/2 the pair (i, j) has rank T(j) - T(lo) + i,
// so contiguous rank ranges partition the work deterministically.

std::uint64_t tri(std::uint64_t x) { return x * (x - 1) / 2; }

struct PairCursor {
  std::uint64_t i = 0;
  std::uint64_t j = 1;
  void advance() {
    if (++i == j) {
      i = 0;
      ++j;
    }
  }
};

PairCursor locate_pair(std::uint64_t lo, std::uint64_t rank) {
  const std::uint64_t r = rank + tri(lo);
  auto j = static_cast<std::uint64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(r))) / 2.0);
  if (j < 1) j = 1;
  while (j > 1 && tri(j) > r) --j;
  while (tri(j + 1) <= r) ++j;
  return {r - tri(j), j};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> chunk_ranges(
    std::uint64_t total, int workers) {
  std::uint64_t w = workers < 1 ? 1 : static_cast<std::uint64_t>(workers);
  if (w > total) w = total == 0 ? 1 : total;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(w);
  for (std::uint64_t t = 0; t < w; ++t) {
    out.emplace_back(total * t / w, total * (t + 1) / w);
  }
  return out;
}

// Runs fn(worker, begin, end) over the chunks, inline when there is only
// one chunk. Exceptions from workers are rethrown after the join.
template <class Fn>
void run_chunks(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& chunks,
                Fn&& fn) {
  if (chunks.size() == 1) {
    fn(0, chunks[0].first, chunks[0].second);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(chunks.size());
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < chunks.size(); ++t) {
    threads.emplace_back([&, t] {
      try {
        fn(t, chunks[t].first, chunks[t].second);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t max_bits(const BigInt& a, const BigInt& b, const BigInt& c) {
  return std::max({bit_length(a), bit_length(b), bit_length(c)});
}

template <class Role>
std::uint64_t max_bits(const Homogeneous<Role>& t) {
  return max_bits(t.a, t.b, t.c);
}

[[noreturn]] void throw_budget(const char* what, std::uint64_t projected,
                               std::uint64_t cap, int stage) {
  std::ostringstream os;
  os << "budget exceeded at stage " << stage << ": projected " << what << " "
     << projected << " > " << cap;
  throw BudgetExceeded(os.str());
}

[[noreturn]] void throw_budget_early(const char* what, std::uint64_t cap,
                                     int stage) {
  std::ostringstream os;
  os << "budget exceeded at stage " << stage << ": " << what << " cap " << cap
     << " reached during enumeration";
  throw BudgetExceeded(os.str());
}

void rebuild_indexes(Configuration& c) {
  c.point_index.clear();
  c.point_index.reserve(c.points.size() * 2);
  for (std::uint32_t i = 0; i < c.points.size(); ++i) {
    c.point_index.emplace(c.points[i], i);
  }
  c.line_index.clear();
  c.line_index.reserve(c.lines.size() * 2);
  for (std::uint32_t i = 0; i < c.lines.size(); ++i) {
    c.line_index.emplace(c.lines[i], i);
  }
}

void rebuild_incidence_by_scan(Configuration& c) {
  c.lines_of_point.assign(c.points.size(), {});
  c.points_of_line.assign(c.lines.size(), {});
  for (std::uint32_t li = 0; li < c.lines.size(); ++li) {
    for (std::uint32_t pi = 0; pi < c.points.size(); ++pi) {
      if (incident(c.points[pi], c.lines[li])) {
        c.points_of_line[li].push_back(pi);
        c.lines_of_point[pi].push_back(li);
      }
    }
  }
}

}  // namespace

Configuration init(const StartConfig& cfg, ParallelPolicy policy) {
  auto violations = validate_start(cfg);
  if (!violations.empty()) {
    const bool collinear =
        std::any_of(violations.begin(), violations.end(), [](const Violation& v) {
          return v.kind == Violation::Kind::collinear_triple;
        });
    // Collinear seeds break the process itself; parallel connecting lines
    // only break the error policy, the other policies define what a meet at
    // infinity means.
    if (collinear || policy == ParallelPolicy::error) {
      throw InvalidStart(std::move(violations));
    }
  }

  Configuration c;
  c.stage = 1;
  c.points.reserve(4);
  for (const auto& rp : cfg.points) c.points.push_back(affine_point(rp.x, rp.y));
  std::sort(c.points.begin(), c.points.end());

  std::vector<Line> joins;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      joins.push_back(line_through(c.points[i], c.points[j]));
    }
  }
  std::sort(joins.begin(), joins.end());
  joins.erase(std::unique(joins.begin(), joins.end()), joins.end());
  c.lines = std::move(joins);

  rebuild_indexes(c);
  rebuild_incidence_by_scan(c);
  return c;
}

Configuration intersection_step(const Configuration& c, ParallelPolicy policy,
                                const Budget& budget, int workers,
                                StepDiagnostics* diag) {
  const std::uint64_t m = c.lines.size();
  const std::uint64_t lo =
      std::min<std::uint64_t>(c.prior_line_count, m == 0 ? 0 : m);
  const std::uint64_t total = tri(m) - tri(lo);

  struct Local {
    std::unordered_map<Point, std::vector<std::uint32_t>, TripleHash<PointRole>>
        fresh;
    std::uint64_t infinity_pairs = 0;
    std::uint64_t existing_hits = 0;
    std::uint64_t error_rank = UINT64_MAX;
  };

  const auto chunks = chunk_ranges(total, workers);
  std::vector<Local> locals(chunks.size());
  // 0 = run on, 1 = point cap, 2 = bit cap. An early abort is sound: one
  // worker's locally distinct fresh set never exceeds the merged fresh set,
  // so the cap is genuinely unreachable whenever it fires. Disabled under
  // the error policy so that "first parallel pair" stays well defined.
  std::atomic<int> abort_reason{0};
  const std::uint64_t existing_points = c.points.size();
  const bool allow_early_abort = policy != ParallelPolicy::error;
  auto abort_with = [&abort_reason](int reason) {
    int expected = 0;
    abort_reason.compare_exchange_strong(expected, reason,
                                         std::memory_order_relaxed);
  };

  run_chunks(chunks, [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    Local& local = locals[w];
    if (begin >= end) return;
    PairCursor cur = locate_pair(lo, begin);
    for (std::uint64_t rank = begin; rank < end; ++rank, cur.advance()) {
      if ((rank & 511u) == 0 &&
          abort_reason.load(std::memory_order_relaxed) != 0) {
        return;
      }
      BigInt x, y, z;
      detail::cross(c.lines[cur.i], c.lines[cur.j], x, y, z);
      Point t = normalized_point(x, y, z);
      if (t.at_infinity()) {
        ++local.infinity_pairs;
        if (policy == ParallelPolicy::skip) continue;
        if (policy == ParallelPolicy::error) {
          local.error_rank = std::min(local.error_rank, rank);
          continue;
        }
      }
      if (c.point_index.count(t) != 0) {
        ++local.existing_hits;
        continue;
      }
      if (allow_early_abort && max_bits(t) > budget.max_coord_bits) {
        abort_with(2);
        return;
      }
      auto& gens = local.fresh[t];
      gens.push_back(static_cast<std::uint32_t>(cur.i));
      gens.push_back(static_cast<std::uint32_t>(cur.j));
      if (allow_early_abort &&
          existing_points + local.fresh.size() > budget.max_points) {
        abort_with(1);
        return;
      }
    }
  });

  if (policy == ParallelPolicy::error) {
    std::uint64_t first = UINT64_MAX;
    for (const auto& l : locals) first = std::min(first, l.error_rank);
    if (first != UINT64_MAX) {
      PairCursor cur = locate_pair(lo, first);
      std::ostringstream os;
      os << "parallel lines encountered at stage " << c.stage << ": "
         << c.lines[cur.i] << " and " << c.lines[cur.j];
      throw ParallelLinesEncountered(os.str());
    }
  }

  // a stopped enumeration is incomplete and must never commit
  switch (abort_reason.load()) {
    case 1: throw_budget_early("point count", budget.max_points, c.stage);
    case 2: throw_budget_early("coordinate bits", budget.max_coord_bits, c.stage);
    default: break;
  }

  // merge fresh points from all workers; generator lists are unioned
  std::unordered_map<Point, std::vector<std::uint32_t>, TripleHash<PointRole>>
      merged;
  for (auto& local : locals) {
    for (auto& [pt, gens] : local.fresh) {
      auto& dst = merged[pt];
      dst.insert(dst.end(), gens.begin(), gens.end());
    }
    local.fresh.clear();
  }

  if (existing_points + merged.size() > budget.max_points) {
    throw_budget("point count", existing_points + merged.size(),
                 budget.max_points, c.stage);
  }

  std::vector<std::pair<Point, std::vector<std::uint32_t>>> fresh(
      std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end()));
  std::sort(fresh.begin(), fresh.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::uint64_t fresh_bits = 0;
  for (const auto& [pt, gens] : fresh) fresh_bits = std::max(fresh_bits, max_bits(pt));
  if (fresh_bits > budget.max_coord_bits) {
    throw_budget("coordinate bits", fresh_bits, budget.max_coord_bits, c.stage);
  }

  Configuration out = c;
  out.fresh_point_begin = out.points.size();
  for (auto& [pt, gens] : fresh) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    const auto idx = static_cast<std::uint32_t>(out.points.size());
    out.point_index.emplace(pt, idx);
    out.points.push_back(pt);
    // every line through a fresh point shows up in some generating pair,
    // so `gens` is the complete pencil of the point
    out.lines_of_point.push_back(gens);
    for (std::uint32_t li : gens) out.points_of_line[li].push_back(idx);
  }

  if (diag) {
    diag->candidate_pairs = total;
    diag->fresh = fresh.size();
    for (const auto& l : locals) {
      diag->existing_hits += l.existing_hits;
      diag->infinity_pairs += l.infinity_pairs;
    }
  }
  return out;
}

Configuration connection_step(const Configuration& c, const Budget& budget,
                              int workers, StepDiagnostics* diag) {
  const std::uint64_t n = c.points.size();
  const std::uint64_t lo = std::min<std::uint64_t>(c.fresh_point_begin, n);
  const std::uint64_t total = tri(n) - tri(lo);

  struct Local {
    std::unordered_set<Line, TripleHash<LineRole>> fresh;
    std::uint64_t existing_hits = 0;
  };

  const auto chunks = chunk_ranges(total, workers);
  std::vector<Local> locals(chunks.size());
  std::atomic<int> abort_reason{0};  // 0 = run on, 1 = line cap, 2 = bit cap
  const std::uint64_t existing_lines = c.lines.size();
  auto abort_with = [&abort_reason](int reason) {
    int expected = 0;
    abort_reason.compare_exchange_strong(expected, reason,
                                         std::memory_order_relaxed);
  };

  run_chunks(chunks, [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    Local& local = locals[w];
    if (begin >= end) return;
    PairCursor cur = locate_pair(lo, begin);
    for (std::uint64_t rank = begin; rank < end; ++rank, cur.advance()) {
      if ((rank & 511u) == 0 &&
          abort_reason.load(std::memory_order_relaxed) != 0) {
        return;
      }
      BigInt x, y, z;
      detail::cross(c.points[cur.i], c.points[cur.j], x, y, z);
      Line l = normalized_line(x, y, z);
      if (c.line_index.count(l) != 0) {
        ++local.existing_hits;
        continue;
      }
      if (max_bits(l) > budget.max_coord_bits) {
        abort_with(2);
        return;
      }
      local.fresh.insert(std::move(l));
      if (existing_lines + local.fresh.size() > budget.max_lines) {
        abort_with(1);
        return;
      }
    }
  });

  switch (abort_reason.load()) {
    case 1: throw_budget_early("line count", budget.max_lines, c.stage);
    case 2: throw_budget_early("coordinate bits", budget.max_coord_bits, c.stage);
    default: break;
  }

  std::unordered_set<Line, TripleHash<LineRole>> merged;
  for (auto& local : locals) {
    merged.insert(std::make_move_iterator(local.fresh.begin()),
                  std::make_move_iterator(local.fresh.end()));
    local.fresh.clear();
  }

  if (existing_lines + merged.size() > budget.max_lines) {
    throw_budget("line count", existing_lines + merged.size(), budget.max_lines,
                 c.stage);
  }

  std::vector<Line> fresh(std::make_move_iterator(merged.begin()),
                          std::make_move_iterator(merged.end()));
  std::sort(fresh.begin(), fresh.end());

  std::uint64_t fresh_bits = 0;
  for (const auto& l : fresh) fresh_bits = std::max(fresh_bits, max_bits(l));
  if (fresh_bits > budget.max_coord_bits) {
    throw_budget("coordinate bits", fresh_bits, budget.max_coord_bits, c.stage);
  }

  // register every configuration point lying on each fresh line, not just
  // the generating pair
  std::vector<std::vector<std::uint32_t>> rows(fresh.size());
  const auto row_chunks = chunk_ranges(fresh.size(), workers);
  run_chunks(row_chunks, [&](std::size_t, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t li = begin; li < end; ++li) {
      auto& row = rows[li];
      for (std::uint32_t pi = 0; pi < n; ++pi) {
        if (incident(c.points[pi], fresh[li])) row.push_back(pi);
      }
    }
  });

  Configuration out = c;
  for (std::size_t fi = 0; fi < fresh.size(); ++fi) {
    const auto idx = static_cast<std::uint32_t>(out.lines.size());
    out.line_index.emplace(fresh[fi], idx);
    out.lines.push_back(fresh[fi]);
    out.points_of_line.push_back(rows[fi]);
    for (std::uint32_t pi : rows[fi]) out.lines_of_point[pi].push_back(idx);
  }

  if (diag) {
    diag->candidate_pairs = total;
    diag->fresh = fresh.size();
    for (const auto& l : locals) diag->existing_hits += l.existing_hits;
  }
  return out;
}

std::pair<Configuration, StageStats> run_stage(const Configuration& c,
                                               ParallelPolicy policy,
                                               const Budget& budget, int workers,
                                               StageDiagnostics* diag) {
  const auto t0 = Clock::now();
  Configuration mid = intersection_step(c, policy, budget, workers,
                                        diag ? &diag->intersect : nullptr);
  const auto t1 = Clock::now();
  Configuration next =
      connection_step(mid, budget, workers, diag ? &diag->connect : nullptr);
  const auto t2 = Clock::now();

  next.stage = c.stage + 1;
  next.prior_line_count = c.lines.size();
  next.fresh_point_begin = 0;

  StageStats stats = degrees(next);
  stats.intersect_ms = ms_between(t0, t1);
  stats.connect_ms = ms_between(t1, t2);
  return {std::move(next), stats};
}

Configuration naive_stage(const Configuration& c, ParallelPolicy policy,
                          const Budget& budget) {
  std::unordered_set<Point, TripleHash<PointRole>> points(c.points.begin(),
                                                          c.points.end());
  const std::uint64_t m = c.lines.size();
  for (std::uint64_t j = 1; j < m; ++j) {
    for (std::uint64_t i = 0; i < j; ++i) {
      Point t = meet(c.lines[i], c.lines[j]);
      if (t.at_infinity()) {
        if (policy == ParallelPolicy::skip) continue;
        if (policy == ParallelPolicy::error) {
          std::ostringstream os;
          os << "parallel lines encountered at stage " << c.stage << ": "
             << c.lines[i] << " and " << c.lines[j];
          throw ParallelLinesEncountered(os.str());
        }
      }
      points.insert(std::move(t));
    }
  }
  if (points.size() > budget.max_points) {
    throw_budget("point count", points.size(), budget.max_points, c.stage);
  }

  Configuration out;
  out.stage = c.stage + 1;
  out.points.assign(points.begin(), points.end());
  std::sort(out.points.begin(), out.points.end());

  std::unordered_set<Line, TripleHash<LineRole>> lines(c.lines.begin(),
                                                       c.lines.end());
  const std::uint64_t n = out.points.size();
  for (std::uint64_t j = 1; j < n; ++j) {
    for (std::uint64_t i = 0; i < j; ++i) {
      lines.insert(line_through(out.points[i], out.points[j]));
    }
  }
  if (lines.size() > budget.max_lines) {
    throw_budget("line count", lines.size(), budget.max_lines, c.stage);
  }
  out.lines.assign(lines.begin(), lines.end());
  std::sort(out.lines.begin(), out.lines.end());

  std::uint64_t bits = 0;
  for (const auto& p : out.points) bits = std::max(bits, max_bits(p));
  for (const auto& l : out.lines) bits = std::max(bits, max_bits(l));
  if (bits > budget.max_coord_bits) {
    throw_budget("coordinate bits", bits, budget.max_coord_bits, c.stage);
  }

  rebuild_indexes(out);
  rebuild_incidence_by_scan(out);
  return out;
}

StageStats degrees(const Configuration& c) {
  StageStats s;
  s.stage = c.stage;
  s.point_count = c.points.size();
  s.line_count = c.lines.size();
  s.min_point_degree = UINT64_MAX;
  s.min_line_degree = UINT64_MAX;
  for (const auto& pencil : c.lines_of_point) {
    s.min_point_degree = std::min<std::uint64_t>(s.min_point_degree, pencil.size());
    s.max_point_degree = std::max<std::uint64_t>(s.max_point_degree, pencil.size());
  }
  for (const auto& row : c.points_of_line) {
    s.min_line_degree = std::min<std::uint64_t>(s.min_line_degree, row.size());
    s.max_line_degree = std::max<std::uint64_t>(s.max_line_degree, row.size());
  }
  if (c.points.empty()) s.min_point_degree = 0;
  if (c.lines.empty()) s.min_line_degree = 0;
  s.parallel_pairs = parallel_pair_count(c.lines);
  for (const auto& p : c.points) {
    s.max_coord_bits = std::max(s.max_coord_bits, max_bits(p));
  }
  for (const auto& l : c.lines) {
    s.max_coord_bits = std::max(s.max_coord_bits, max_bits(l));
  }
  return s;
}

std::uint64_t parallel_pair_count(const std::vector<Line>& lines) {
  std::unordered_map<Line, std::uint64_t, TripleHash<LineRole>> classes;
  bool has_infinity_line = false;
  for (const auto& l : lines) {
    if (sgn(l.a) == 0 && sgn(l.b) == 0) {
      has_infinity_line = true;  // meets every other line at infinity
      continue;
    }
    ++classes[direction_of(l)];
  }
  std::uint64_t count = 0;
  for (const auto& [dir, k] : classes) count += tri(k);
  if (has_infinity_line) count += lines.size() - 1;
  return count;
}

Configuration dual(const Configuration& c) {
  Configuration d;
  d.stage = c.stage;
  d.points.reserve(c.lines.size());
  for (const auto& l : c.lines) d.points.push_back(dual(l));
  d.lines.reserve(c.points.size());
  for (const auto& p : c.points) d.lines.push_back(dual(p));
  d.lines_of_point = c.points_of_line;
  d.points_of_line = c.lines_of_point;
  rebuild_indexes(d);
  return d;
}

namespace {
[[noreturn]] void inconsistent(const std::string& what) {
  throw TheoremViolation("configuration inconsistent: " + what);
}
}  // namespace

void check_consistency(const Configuration& c) {
  if (c.lines_of_point.size() != c.points.size() ||
      c.points_of_line.size() != c.lines.size() ||
      c.point_index.size() != c.points.size() ||
      c.line_index.size() != c.lines.size()) {
    inconsistent("table sizes disagree");
  }
  for (std::uint32_t i = 0; i < c.points.size(); ++i) {
    const Point& p = c.points[i];
    if (normalized_point(p.a, p.b, p.c) != p) inconsistent("point not canonical");
    auto it = c.point_index.find(p);
    if (it == c.point_index.end() || it->second != i) inconsistent("point index");
  }
  for (std::uint32_t i = 0; i < c.lines.size(); ++i) {
    const Line& l = c.lines[i];
    if (normalized_line(l.a, l.b, l.c) != l) inconsistent("line not canonical");
    auto it = c.line_index.find(l);
    if (it == c.line_index.end() || it->second != i) inconsistent("line index");
  }
  for (std::uint32_t pi = 0; pi < c.points.size(); ++pi) {
    const auto& pencil = c.lines_of_point[pi];
    if (!std::is_sorted(pencil.begin(), pencil.end())) inconsistent("pencil order");
    if (std::adjacent_find(pencil.begin(), pencil.end()) != pencil.end()) {
      inconsistent("pencil duplicate");
    }
    if (pencil.size() < 2) inconsistent("point with fewer than two lines");
    for (std::uint32_t li : pencil) {
      if (li >= c.lines.size()) inconsistent("pencil range");
      if (!incident(c.points[pi], c.lines[li])) inconsistent("false incidence");
      const auto& row = c.points_of_line[li];
      if (!std::binary_search(row.begin(), row.end(), pi)) {
        inconsistent("incidence not mutual");
      }
    }
  }
  for (std::uint32_t li = 0; li < c.lines.size(); ++li) {
    const auto& row = c.points_of_line[li];
    if (!std::is_sorted(row.begin(), row.end())) inconsistent("row order");
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      inconsistent("row duplicate");
    }
    if (row.size() < 2) inconsistent("line with fewer than two points");
    for (std::uint32_t pi : row) {
      if (pi >= c.points.size()) inconsistent("row range");
      const auto& pencil = c.lines_of_point[pi];
      if (!std::binary_search(pencil.begin(), pencil.end(), li)) {
        inconsistent("incidence not mutual");
      }
    }
  }
  // completeness: every incident pair must be registered
  for (std::uint32_t li = 0; li < c.lines.size(); ++li) {
    std::uint64_t on_line = 0;
    for (std::uint32_t pi = 0; pi < c.points.size(); ++pi) {
      if (incident(c.points[pi], c.lines[li])) ++on_line;
    }
    if (on_line != c.points_of_line[li].size()) {
      inconsistent("incidence incomplete");
    }
  }
}

bool same_sets(const Configuration& x, const Configuration& y) {
  auto px = x.points;
  auto py = y.points;
  std::sort(px.begin(), px.end());
  std::sort(py.begin(), py.end());
  if (px != py) return false;
  auto lx = x.lines;
  auto ly = y.lines;
  std::sort(lx.begin(), lx.end());
  std::sort(ly.begin(), ly.end());
  return lx == ly;
}

}  // namespace plc
